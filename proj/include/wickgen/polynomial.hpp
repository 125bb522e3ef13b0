#pragma once

#include <utility>
#include <vector>

#include "wickgen/rational.hpp"

namespace wickgen {

/// Univariate polynomial over the rationals, coefficients by ascending degree.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const Rat& c) { return Poly({c}); }
    static Poly x() { return Poly({Rat(0), Rat(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
    bool is_zero() const { return c_.empty(); }
    const Rat& coeff(int k) const;
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat lead() const { return c_.empty() ? Rat(0) : c_.back(); }

    Rat eval(const Rat& x) const;
    Poly derivative() const;
    Poly monic() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& c) const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    /// euclidean remainder
    Poly rem(const Poly& divisor) const;
    /// euclidean quotient
    Poly quot(const Poly& divisor) const;

private:
    void trim();
    std::vector<Rat> c_;
};

Poly gcd(Poly a, Poly b);

/// number of distinct real roots of p in the half-open interval (lo, hi]
int sturm_count(const Poly& p, const Rat& lo, const Rat& hi);
/// number of distinct real roots of p on the whole real line
int sturm_count_all(const Poly& p);

/// a bound B such that all real roots of p lie in (-B, B]; Cauchy bound
Rat root_bound(const Poly& p);

/// Disjoint isolating intervals (lo, hi] for all distinct real roots of a
/// squarefree p, ordered increasingly.
std::vector<std::pair<Rat, Rat>> isolate_real_roots(const Poly& p);

/// Refine an isolating interval of p by bisection until its width is <= eps.
std::pair<Rat, Rat> refine_interval(const Poly& p, std::pair<Rat, Rat> iv, const Rat& eps);

/// Exact sign of q evaluated at the unique root of p inside the isolating
/// interval iv (p squarefree on iv). Returns -1, 0 or +1.
int sign_at_root(const Poly& p, std::pair<Rat, Rat> iv, const Poly& q);

}  // namespace wickgen
