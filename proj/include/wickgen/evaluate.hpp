#pragma once

#include <map>
#include <string>
#include <vector>

#include "wickgen/scheme.hpp"

namespace wickgen {

/// Metric data for scheme evaluation. Every pair in a scheme is bridged by
/// one copy of g_cov; the epsilon block evaluates to
/// orientation * perm-symbol / sqrt(|det g|), which must be rational (all
/// transformed metrics used here are unimodular images of eta).
struct EvalMetric {
    DenseTensor g_cov;
    int orientation = 1;
    Rat eps_scale = 1;
    bool diagonal = true;

    static EvalMetric standard(int dim);  // eta = diag(-1, 1, ..., 1)
    static EvalMetric from_cov(DenseTensor g, int orientation = 1);
};

/// values keyed by BlockDescriptor::key(); all instances of one coordinate
/// share a value
using BlockValues = std::map<std::string, DenseTensor>;

/// deterministic per-key sample of every block's symmetry class
BlockValues random_block_values(const std::vector<BlockDescriptor>& blocks, int dim,
                                std::uint64_t seed);

/// Exact evaluation of a term at the given block values and metric. The
/// result carries the output rank, covariant, symmetrized over the output
/// signature.
DenseTensor evaluate_term(const Term& t, const BlockValues& values, const EvalMetric& gm);

/// Slow independent oracle: evaluates the same contraction as one flat sum
/// over all pair index assignments. Used by tests only.
DenseTensor evaluate_term_naive(const Term& t, const BlockValues& values, const EvalMetric& gm);

}  // namespace wickgen
