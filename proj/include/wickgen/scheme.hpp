#pragma once

#include <string>
#include <vector>

#include "wickgen/blocks.hpp"
#include "wickgen/model.hpp"

namespace wickgen {

/// Output slot structure of a component: for each multiplet entry i with
/// q_i > 0 and rank k_i > 0, a run of q_i blocks of k_i covariant slots,
/// symmetric under permutations of whole blocks within the run.
struct OutputSignature {
    int rank = 0;
    struct Run {
        std::vector<std::vector<int>> blocks;  // global output slot ids
    };
    std::vector<Run> runs;

    static OutputSignature for_component(const ModelSpec& m, const MultiIndex& Q);
    static OutputSignature plain(int rank);      // no output symmetry
    static OutputSignature symmetric(int rank);  // one run of single-slot blocks
    std::string key() const;
};

/// One candidate counterterm: a monomial of generator blocks together with a
/// complete contraction scheme. Slots are numbered block-by-block (in
/// Monomial::all_blocks order), then the optional epsilon block, then output
/// slots. Every pair is bridged by one copy of the covariant metric.
struct Term {
    Monomial monomial;
    OutputSignature out;
    bool epsilon = false;                       // at most one epsilon block
    std::vector<std::pair<int, int>> pairs;     // canonical perfect matching
    std::string scheme_key;                     // canonical multigraph key

    int block_slot_count() const;               // block slots only
    int total_slots() const;
    /// connected components of the contraction graph over the block and
    /// epsilon vertices (contractions through output slots do not connect);
    /// rank-0 blocks are isolated components
    int connected_components() const;
    /// some component touches no output slot: a scalar factor splits off
    bool has_closed_scalar_factor() const;
    /// a closed component made solely of undifferentiated marginal blocks:
    /// the term is a scalar invariant times a smaller term, hence always
    /// redundant in module reduction
    bool has_closed_marginal_factor() const;
    /// provably redundant in module reduction: a closed marginal factor, or a
    /// chain of >= dim directly contracted rank-2 marginal blocks (the matrix
    /// power reduces through the characteristic polynomial)
    bool module_reducible(int dim) const;
    std::string key() const { return monomial.key() + "#" + scheme_key; }
};

/// All complete contraction schemes for the monomial, modulo block-internal
/// slot symmetries, identical-block interchange and output symmetry. In
/// oriented mode the variants with one epsilon insertion are included.
/// Combinatorially vanishing schemes (an antisymmetric pair meeting a
/// symmetric group twice) are dropped.
std::vector<Term> enumerate_schemes(const Monomial& mono, const OutputSignature& out,
                                    bool oriented, int dim);

/// Convenience: build a term from explicit factor index letters, e.g.
///   blocks {S0, m2}, letters {"ccab", ""}      -> m2 * Ric_ab
///   letters use 'a'.. for output slots (position = letter - 'a'); any letter
///   repeated exactly twice marks a contraction; "!eps:abcd" adds an epsilon
///   factor. Used by fixtures and tests.
Term make_term(const Monomial& mono, const OutputSignature& out,
               const std::vector<std::string>& letters, int dim,
               const std::string& eps_letters = "");

}  // namespace wickgen
