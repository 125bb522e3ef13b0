#pragma once

#include <cstdint>
#include <vector>

#include "wickgen/evaluate.hpp"
#include "wickgen/scheme.hpp"

namespace wickgen {

struct ReduceOptions {
    int samples = 5;             // seeded evaluations per independence decision
    int marginal_witnesses = 3;  // fixed marginal values in module mode
    bool marginal_mode = false;
    std::uint64_t seed = 1;
    int dim = 4;
};

/// Independence witness metadata: the report embeds these so a rerun with
/// identical seeds replays the identical basis.
struct BasisWitness {
    std::uint64_t seed = 0;
    int samples = 0;
    int marginal_witnesses = 0;
    bool marginal_mode = false;
};

struct Basis {
    std::vector<Term> terms;
    BasisWitness witness;
};

/// Greedy left-to-right selection over the (already ordered) term list.
/// Plain mode keeps a term iff it enlarges the exact rank of the stacked
/// evaluations. Module mode treats scalar invariants of the marginal fields
/// as coefficients: a term is redundant iff for every fixed marginal witness
/// value its evaluations lie in the span of the kept terms' evaluations.
Basis reduce_basis(const std::vector<Term>& terms, const ReduceOptions& opt);

/// true iff the term's evaluations lie in the span of the basis (module span
/// in marginal mode), under the basis's own witness seeds
bool in_span(const Basis& basis, const Term& candidate, int dim);

/// batched span containment (the basis rows are built once)
std::vector<bool> in_span_many(const Basis& basis, const std::vector<Term>& candidates, int dim);

/// independent re-verification: under a fresh seed the kept terms still have
/// full rank (plain) or full module rank per witness (marginal)
bool verify_basis_stability(const Basis& basis, int dim, std::uint64_t fresh_seed);

/// deterministic evaluation stack used by reduce/in_span (exposed for tests)
Vec evaluation_row(const Term& t, const ReduceOptions& opt, int witness_index);

}  // namespace wickgen
