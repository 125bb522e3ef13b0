#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wickgen/linalg.hpp"
#include "wickgen/tensor.hpp"

namespace wickgen {

/// Index symmetry class of a tensor slot set: disjoint totally symmetric
/// groups, plus linear relations (vanishing symmetrizations and group
/// exchanges). The admissible tensors form a linear subspace; its basis is
/// computed once per (type, dim) and cached.
struct SymmetryType {
    int rank = 0;
    std::vector<std::vector<int>> groups;          // disjoint, totally symmetric
    std::vector<std::vector<int>> vanishing_syms;  // symmetrization over slots == 0
    std::vector<std::pair<std::vector<int>, std::vector<int>>> exchanges;  // swap-invariance

    static SymmetryType none(int rank);
    static SymmetryType symmetric(int rank);
    static SymmetryType antisymmetric(int rank);
    /// derived curvature block S with `derivs` symmetrized derivative slots:
    /// rank 4+derivs, first pair symmetric, trailing (2+derivs) slots
    /// symmetric, symmetrization of slot 1 with the trailing group vanishes,
    /// pair exchange at derivs = 0.
    static SymmetryType curvature(int derivs);
    /// background block: field symmetry on the first `field_rank` slots
    /// (all symmetric when symmetric_field), one symmetric derivative group.
    static SymmetryType background(int field_rank, bool symmetric_field, int derivs);

    std::string key() const;  // canonical cache/identity key
    bool operator==(const SymmetryType& o) const { return key() == o.key(); }
};

/// Solved admissible subspace for one (SymmetryType, dim) pair.
class SymmetrySubspace {
public:
    SymmetrySubspace(const SymmetryType& type, int dim);

    int dim() const { return dim_; }
    int tensor_rank() const { return type_.rank; }
    /// linear dimension of the admissible subspace
    int subspace_dim() const { return static_cast<int>(kernel_.size()); }
    bool empty() const { return subspace_dim() == 0; }

    /// deterministic sample with small rational components, exactly admissible
    DenseTensor random(Rng& rng, Var v = Var::Contra) const;
    /// orthogonal projection onto the admissible subspace
    DenseTensor project(const DenseTensor& t) const;
    bool contains(const DenseTensor& t) const;

private:
    SymmetryType type_;
    int dim_;
    std::vector<std::size_t> orbit_of_;    // component -> orbit id
    std::vector<long> orbit_size_;
    std::vector<Vec> kernel_;              // columns: admissible combos of orbit coords
    Mat gram_inv_;                         // (K^T D K)^-1 for projection
};

/// process-wide cache, keyed by (type key, dim)
const SymmetrySubspace& symmetry_subspace(const SymmetryType& type, int dim);

DenseTensor random_in_symmetry(const SymmetryType& s, int dim, std::uint64_t seed,
                               Var v = Var::Contra);

struct ProjectionResult {
    DenseTensor value;
    bool empty_subspace = false;  // warning: constraints cut the space to {0}
};
ProjectionResult project_symmetry(const DenseTensor& t, const SymmetryType& s);

}  // namespace wickgen
