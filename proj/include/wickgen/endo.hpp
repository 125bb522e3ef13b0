#pragma once

#include <string>
#include <vector>

#include "wickgen/linalg.hpp"
#include "wickgen/polynomial.hpp"
#include "wickgen/reduce.hpp"

namespace wickgen {

/// Endomorphism obtained from a symmetric covariant 2-tensor by raising one
/// index with the inverse Minkowski metric; self-adjoint with respect to eta.
class EndoValue {
public:
    explicit EndoValue(Mat matrix);
    /// from a covariant symmetric 2-tensor value
    static EndoValue from_covariant(const DenseTensor& xi_cov);
    static EndoValue from_contravariant(const DenseTensor& xi_con);

    int dim() const { return static_cast<int>(m_.size()); }
    const Mat& matrix() const { return m_; }
    bool self_adjoint() const;  // eta * m symmetric

private:
    Mat m_;
};

/// (tr x, tr x^2, ..., tr x^n)
std::vector<Rat> trace_invariants(const EndoValue& x);

/// tr x^p for n < p <= 2n, from the first n power traces alone, via the
/// Newton identities and the Cayley-Hamilton recursion.
Rat reduce_trace(long p, const std::vector<Rat>& inv);

/// det(tr x^{i+j-2})_{i,j=1..n}; vanishes exactly at repeated eigenvalues
Rat discriminant(const EndoValue& x);

/// characteristic polynomial det(t I - x), exact (Faddeev-LeVerrier)
Poly char_poly(const EndoValue& x);

struct OrbitRegion {
    enum Kind { Z0, Real, Indeterminate } kind = Indeterminate;
    /// for Real: position (0-based, in increasing eigenvalue order) of the
    /// eigenvalue whose eigenline is timelike; the remaining lines are
    /// spacelike
    int timelike_position = -1;
    std::string label;
};

/// disc == 0 -> Z0; all eigenvalues real and distinct -> Real with the causal
/// tag of each eigenline; complex eigenvalues -> Indeterminate
OrbitRegion orbit_region(const EndoValue& x);

/// Scalar polynomial invariant basis of marginal tensor fields: rank-0
/// complete contractions of 1..max_degree copies, reduced to independence.
/// Terms whose contraction graph is disconnected are decomposable products
/// of lower invariants.
struct ScalarInvariant {
    Term term;
    std::string display;
    bool decomposable = false;
};
std::vector<ScalarInvariant> scalar_invariant_basis(const ModelSpec& m,
                                                    const std::vector<int>& marginal_backgrounds,
                                                    int max_degree, std::uint64_t seed);

}  // namespace wickgen
