#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wickgen/reduce.hpp"
#include "wickgen/render.hpp"

namespace wickgen {

struct EnumerateOptions {
    int marginal_cap = -1;  // -1: iterative deepening up to the hard ceiling n
    int samples = 5;
    int marginal_witnesses = 3;
    std::uint64_t seed = 1;
    /// drop monomials containing differentiated background blocks
    bool constant_backgrounds = false;
};

/// deterministic work counters embedded in reports in place of wall-clock
/// timing (reports must replay byte-identically)
struct WorkCounters {
    long candidate_terms = 0;
    long evaluations = 0;
    long monomials = 0;
};

struct ComponentBasis {
    MultiIndex Q;
    Rat W;
    bool vanishing = false;      // W < 0: the component is exactly zero
    int marginal_cap_used = 0;
    bool saturation_flagged = false;  // hard ceiling hit before stabilization
    std::vector<Monomial> monomials;
    Basis basis;
    std::vector<std::string> rendered;
    WorkCounters work;
};

/// Full pipeline for one Wick component: target weight, monomials, schemes,
/// greedy reduction (module reduction when marginal tensor blocks occur),
/// rendering. Deterministic in the options' seed.
ComponentBasis enumerate_component(const ModelSpec& m, const MultiIndex& Q,
                                   const EnumerateOptions& opt);

/// candidate terms (pre-reduction) for one monomial list, canonically ordered
std::vector<Term> candidate_terms(const ModelSpec& m, const std::vector<Monomial>& monos,
                                  const OutputSignature& out);

}  // namespace wickgen
