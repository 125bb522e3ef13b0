#pragma once

#include <map>
#include <string>
#include <vector>

#include "wickgen/model.hpp"
#include "wickgen/symmetry.hpp"

namespace wickgen {

enum class BlockKind : unsigned char {
    CurvatureS,    // derived curvature coordinate, rank 4 + derivs
    Background,    // derived background coordinate, rank l_j + derivs
    Metric,        // g_{ab}: realized by the pairing semantics, never a monomial member
    InverseMetric, // g^{ab}: likewise
    Kronecker,     // delta^a_b: likewise
    LeviCivita     // epsilon: enters schemes through the epsilon flag
};

/// One generator factor of a candidate counterterm.
struct BlockDescriptor {
    BlockKind kind = BlockKind::CurvatureS;
    int background_index = -1;  // into ModelSpec::backgrounds, for Background kind
    int derivs = 0;             // |A| or |B|
    int rank = 0;
    SymmetryType symmetry;
    Rat coord_weight;           // weight under coordinate scaling
    Rat phys_weight;            // weight under physical scaling (contravariant value)
    bool marginal = false;      // undifferentiated block of a marginal tensor field
    std::string name;           // display name of the underlying field ("S" for curvature)

    /// ordering key used everywhere blocks are sorted or compared
    std::string key() const;
    bool operator<(const BlockDescriptor& o) const { return key() < o.key(); }
    bool operator==(const BlockDescriptor& o) const { return key() == o.key(); }
};

BlockDescriptor make_curvature_block(int derivs);
BlockDescriptor make_background_block(const ModelSpec& m, int background_index, int derivs);

/// A multiset of generator blocks. `blocks` carry positive coordinate weight;
/// `marginal_blocks` are weight-zero undifferentiated marginal tensors.
struct Monomial {
    std::vector<BlockDescriptor> blocks;           // sorted
    std::vector<BlockDescriptor> marginal_blocks;  // sorted
    Rat total_weight;

    std::vector<BlockDescriptor> all_blocks() const;
    int marginal_count() const { return static_cast<int>(marginal_blocks.size()); }
    std::string key() const;
    bool operator<(const Monomial& o) const { return key() < o.key(); }
};

/// All positive-weight generator blocks with coord_weight <= W, plus the
/// weight-zero marginal tensor blocks listed separately. Scalar marginal
/// fields are absorbed into smooth coefficients and excluded entirely.
struct BlockCatalog {
    std::vector<BlockDescriptor> weighted;  // 0 < coord_weight <= W
    std::vector<BlockDescriptor> marginal;  // marginal tensor blocks (weight 0)
};
BlockCatalog catalog_blocks(const ModelSpec& m, const Rat& W);

/// All monomials of positive-weight blocks with total weight exactly
/// W = target_weight(m, Q), each replicated with 0..marginal_cap marginal
/// tensor blocks appended. W < 0 yields nothing; W = 0 yields the empty
/// monomial alone (with its marginal dressings).
std::vector<Monomial> enumerate_monomials(const ModelSpec& m, const MultiIndex& Q,
                                          int marginal_cap);
std::vector<Monomial> enumerate_monomials_for_weight(const ModelSpec& m, const Rat& W,
                                                     int marginal_cap);

}  // namespace wickgen
