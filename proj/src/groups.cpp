#include "wickgen/groups.hpp"

#include <numeric>
#include <stdexcept>

namespace wickgen {

namespace {
Mat minkowski_mat(int dim) {
    Mat eta = identity(static_cast<std::size_t>(dim));
    eta[0][0] = -1;
    return eta;
}
}  // namespace

Mat random_lorentz(int dim, Rng& rng, bool reflect) {
    const std::size_t n = static_cast<std::size_t>(dim);
    Mat eta = minkowski_mat(dim);
    for (;;) {
        // eta * X antisymmetric <=> X in so(1, n-1)
        Mat m(n, Vec(n, Rat(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                Rat v = rat(rng.uniform(-3, 3), rng.uniform(1, 3));
                m[i][j] = v;
                m[j][i] = -v;
            }
        Mat x = mat_mul(invert(eta), m);
        Mat i_minus = identity(n), i_plus = identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                i_minus[i][j] -= x[i][j];
                i_plus[i][j] += x[i][j];
            }
        if (det(i_minus) == 0) continue;
        Mat u = mat_mul(invert(i_minus), i_plus);
        if (reflect) {
            // flip the last spatial axis
            for (std::size_t i = 0; i < n; ++i) u[i][n - 1] = -u[i][n - 1];
        }
        return u;
    }
}

Mat random_unimodular(int dim, Rng& rng, int target_det) {
    const std::size_t n = static_cast<std::size_t>(dim);
    if (target_det != 1 && target_det != -1)
        throw std::invalid_argument("target determinant must be +1 or -1");
    Mat u = identity(n);
    int d = 1;
    const int shears = 2 * dim;
    for (int s = 0; s < shears; ++s) {
        std::size_t i = static_cast<std::size_t>(rng.uniform(0, dim - 1));
        std::size_t j = static_cast<std::size_t>(rng.uniform(0, dim - 1));
        if (i == j) continue;
        Rat c = rat(rng.uniform(-2, 2), rng.uniform(1, 2));
        for (std::size_t k = 0; k < n; ++k) u[i][k] += c * u[j][k];
    }
    // random signed permutation
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(i) - 1))]);
    int parity = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (perm[i] > perm[j]) parity = -parity;
    Mat p(n, Vec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        int sign = rng.uniform(0, 1) ? 1 : -1;
        p[i][static_cast<std::size_t>(perm[i])] = sign;
        d *= sign;
    }
    d *= parity;
    u = mat_mul(p, u);
    if (d != target_det) {
        for (std::size_t k = 0; k < n; ++k) u[0][k] = -u[0][k];
    }
    return u;
}

bool preserves_minkowski(const Mat& u, int dim) {
    Mat eta = minkowski_mat(dim);
    Mat ut(u.size(), Vec(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) ut[i][j] = u[j][i];
    return mat_mul(mat_mul(ut, eta), u) == eta;
}

std::vector<bool> equivariance_check_many(const std::vector<Term>& terms,
                                          const BlockValues& values, int dim, bool oriented,
                                          int trials, std::uint64_t seed) {
    Rng rng(seed);
    EvalMetric std_metric = EvalMetric::standard(dim);
    std::vector<DenseTensor> base;
    base.reserve(terms.size());
    for (const Term& t : terms) base.push_back(evaluate_term(t, values, std_metric));
    std::vector<bool> ok(terms.size(), true);

    const int rounds = trials + (oriented ? 1 : 0);
    for (int i = 0; i < rounds; ++i) {
        // in oriented mode the last round is the orientation-reversing sample
        // that must flip the sign of every epsilon term
        int want;
        if (oriented)
            want = i < trials ? 1 : -1;
        else
            want = rng.uniform(0, 1) ? 1 : -1;
        Mat u = random_unimodular(dim, rng, want);

        DenseTensor eta_t = DenseTensor::minkowski(dim, Var::Co);
        EvalMetric gm = EvalMetric::from_cov(transform(eta_t, u));
        BlockValues moved;
        for (const auto& [k, v] : values) moved.emplace(k, transform(v, u));

        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (!ok[j]) continue;
            DenseTensor lhs = evaluate_term(terms[j], moved, gm);
            DenseTensor rhs = transform(base[j], u);
            if (terms[j].epsilon && want < 0) rhs *= Rat(-1);
            if (!(lhs == rhs)) ok[j] = false;
        }
    }
    return ok;
}

bool equivariance_check(const Term& t, const BlockValues& values, int dim, bool oriented,
                        int trials, std::uint64_t seed) {
    return equivariance_check_many({t}, values, dim, oriented, trials, seed)[0];
}

}  // namespace wickgen
