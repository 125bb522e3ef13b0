#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "wickgen/rational.hpp"

namespace wickgen {

enum class Var : unsigned char { Co, Contra };

/// Dense tensor of exact rationals: every one of the dim^rank components is
/// stored (row-major). The per-slot variance tag is carried along so that
/// contraction and transformation can check their preconditions.
class DenseTensor {
public:
    DenseTensor() : dim_(1) {}
    DenseTensor(int dim, std::vector<Var> variance);
    static DenseTensor scalar(const Rat& value, int dim = 1);
    static DenseTensor zeros(int dim, int rank, Var v);
    /// Kronecker delta (one contravariant, one covariant slot).
    static DenseTensor kronecker(int dim);
    /// diag(-1, 1, ..., 1), both slots with the given variance.
    static DenseTensor minkowski(int dim, Var v = Var::Co);
    /// permutation symbol, rank = dim, all slots with the given variance.
    static DenseTensor levi_civita(int dim, Var v = Var::Contra);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(variance_.size()); }
    const std::vector<Var>& variance() const { return variance_; }
    std::size_t size() const { return comps_.size(); }

    const Rat& operator[](std::size_t flat) const { return comps_[flat]; }
    Rat& operator[](std::size_t flat) { return comps_[flat]; }
    const Rat& at(std::span<const int> idx) const { return comps_[flatten(idx)]; }
    Rat& at(std::span<const int> idx) { return comps_[flatten(idx)]; }
    const Rat& at(std::initializer_list<int> idx) const {
        return at(std::span<const int>(idx.begin(), idx.size()));
    }
    Rat& at(std::initializer_list<int> idx) {
        return comps_[flatten(std::span<const int>(idx.begin(), idx.size()))];
    }

    std::size_t flatten(std::span<const int> idx) const;
    void unflatten(std::size_t flat, std::span<int> idx) const;

    bool operator==(const DenseTensor& o) const;
    bool is_zero() const;

    DenseTensor& operator+=(const DenseTensor& o);
    DenseTensor& operator-=(const DenseTensor& o);
    DenseTensor& operator*=(const Rat& c);
    friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
    friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
    friend DenseTensor operator*(const Rat& c, DenseTensor t) { return t *= c; }

    /// plain tensor product (variances concatenate)
    DenseTensor outer(const DenseTensor& o) const;
    /// sum over one covariant/contravariant slot pair (direct, no metric)
    DenseTensor contract_pair(int slot_a, int slot_b) const;
    /// permute slots: result slot i takes this tensor's slot perm[i]
    DenseTensor permuted(std::span<const int> perm) const;
    /// average over all rank! slot permutations
    DenseTensor symmetrized() const;
    /// average over permutations of the given slots only
    DenseTensor symmetrized_over(std::span<const int> slots) const;
    bool is_symmetric() const;

private:
    int dim_;
    std::vector<Var> variance_;
    std::vector<Rat> comps_;
};

/// Symmetric tensor product: full symmetrization of a (x) b.
DenseTensor sym_product(const DenseTensor& a, const DenseTensor& b);

/// l-fold contraction product of a covariant symmetric rank-l tensor into a
/// contravariant symmetric rank-k tensor (l <= k): binom(k,l) times the plain
/// contraction into the first l slots. On decomposables this evaluates to
/// binom(k,l) <g0,f0>^l f0^(k-l).
DenseTensor contract_l(const DenseTensor& g, const DenseTensor& f, int l);

/// Apply an invertible matrix u to every slot (u on contravariant slots, the
/// inverse transpose on covariant ones), times |det u|^density_weight.
/// Exactness contract: density_weight != 0 requires |det u| = 1.
DenseTensor transform(const DenseTensor& t, const std::vector<std::vector<Rat>>& u,
                      const Rat& density_weight = 0);

/// Iterate over all dim^rank index tuples (row-major order).
class IndexIter {
public:
    IndexIter(int dim, int rank) : dim_(dim), idx_(rank, 0), done_(false) {}
    bool done() const { return done_; }
    std::span<const int> operator*() const { return idx_; }
    void advance() {
        for (int k = static_cast<int>(idx_.size()) - 1; k >= 0; --k) {
            if (++idx_[k] < dim_) return;
            idx_[k] = 0;
        }
        done_ = true;
    }

private:
    int dim_;
    std::vector<int> idx_;
    bool done_;
};

}  // namespace wickgen
