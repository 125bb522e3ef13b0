#pragma once

#include "wickgen/evaluate.hpp"
#include "wickgen/linalg.hpp"
#include "wickgen/scheme.hpp"

namespace wickgen {

/// Exact rational element of O(1,n-1): Cayley transform u = (I-X)^-1 (I+X)
/// of a random rational X with eta*X antisymmetric. Always has det +1; pass
/// reflect=true to compose with a spatial reflection (det -1).
Mat random_lorentz(int dim, Rng& rng, bool reflect = false);

/// Random unimodular rational matrix: product of elementary shears and a
/// signed permutation, with determinant exactly target_det (+1 or -1).
Mat random_unimodular(int dim, Rng& rng, int target_det);

/// u^T eta u == eta, exactly
bool preserves_minkowski(const Mat& u, int dim);

/// Exact GL-equivariance test of a term's evaluation: for `trials` random
/// unimodular u, evaluating at u-transformed block values and the
/// u-transformed metric must reproduce the u-transform of the original
/// evaluation (times sgn(det u) when the scheme carries an epsilon block).
/// Oriented mode draws det +1 samples for the equality run and one det -1
/// sample to confirm the epsilon sign flip (or plain equality for
/// epsilon-free terms).
bool equivariance_check(const Term& t, const BlockValues& values, int dim, bool oriented,
                        int trials, std::uint64_t seed);

/// Same check over a family of terms sharing one value table; the transformed
/// values are computed once per trial instead of once per term.
std::vector<bool> equivariance_check_many(const std::vector<Term>& terms,
                                          const BlockValues& values, int dim, bool oriented,
                                          int trials, std::uint64_t seed);

}  // namespace wickgen
