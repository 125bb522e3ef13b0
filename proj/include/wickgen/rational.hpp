#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wickgen {

/// Exact rational scalar. All core arithmetic in this project is performed
/// over Rat; floating point never enters any basis or rank decision.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline long to_long(const Rat& q) {
    if (!is_integer(q)) throw std::invalid_argument("rational is not an integer: " + q.get_str());
    if (!q.get_num().fits_slong_p()) throw std::overflow_error("integer too large");
    return q.get_num().get_si();
}

// q^e for integer e (negative allowed when q != 0).
inline Rat pow_rat(const Rat& q, long e) {
    if (e == 0) return 1;
    Rat base = q;
    if (e < 0) {
        if (q == 0) throw std::domain_error("0^negative");
        base = 1 / q;
        e = -e;
    }
    Rat acc = 1;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// Exact q^(num/den); returns nullopt when the result is irrational.
std::optional<Rat> pow_rat_exact(const Rat& q, const Rat& exponent);

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline Int factorial(long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

/// Parse "p/q", "p", or "-p/q" exactly. Throws std::invalid_argument on junk.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

/// Deterministic splittable RNG used everywhere randomness is required.
/// Each consumer derives its stream from an explicit seed; no global state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// uniform in [lo, hi] inclusive
    long uniform(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    /// small nonzero-biased rational with numerator in [-6,6], denominator in {1,2,3}
    Rat small_rat() {
        long num = uniform(-6, 6);
        long den = uniform(1, 3);
        return rat(num, den);
    }

    Rat small_nonzero_rat() {
        Rat r = small_rat();
        while (r == 0) r = small_rat();
        return r;
    }

    /// derive an independent stream for a named sub-task
    Rng fork(std::uint64_t salt) const {
        Rng r(state_ ^ (salt * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
        return r;
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace wickgen
