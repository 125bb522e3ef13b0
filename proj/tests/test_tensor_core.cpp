#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "wickgen/linalg.hpp"
#include "wickgen/symmetry.hpp"
#include "wickgen/model.hpp"
#include "wickgen/tensor.hpp"

using namespace wickgen;

namespace {

DenseTensor vec(int dim, std::vector<long> comps, Var v) {
    DenseTensor t = DenseTensor::zeros(dim, 1, v);
    for (int i = 0; i < dim; ++i) t[static_cast<std::size_t>(i)] = comps[static_cast<std::size_t>(i)];
    return t;
}

// brute-force reference: average of a (x) b over all permutations of the
// combined slots, written independently of DenseTensor::symmetrized
DenseTensor sym_product_oracle(const DenseTensor& a, const DenseTensor& b) {
    DenseTensor prod = a.outer(b);
    const int r = prod.rank();
    std::vector<int> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), 0);
    DenseTensor acc = DenseTensor::zeros(prod.dim(), r, a.rank() ? a.variance()[0] : Var::Contra);
    long count = 0;
    std::vector<int> src(static_cast<std::size_t>(r));
    do {
        DenseTensor moved = DenseTensor(prod.dim(), prod.variance());
        for (IndexIter it(prod.dim(), r); !it.done(); it.advance()) {
            std::span<const int> dst = *it;
            for (int s = 0; s < r; ++s) src[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = dst[s];
            moved.at(dst) = prod.at(src);
        }
        acc += moved;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc *= Rat(1, count);
    return acc;
}

}  // namespace

TEST_CASE("sym_product basics") {
    // one-dimensional symmetrization is a plain product
    DenseTensor a = DenseTensor::scalar(2, 1);
    DenseTensor b = DenseTensor::scalar(3, 1);
    DenseTensor a1 = vec(1, {2}, Var::Contra), b1 = vec(1, {3}, Var::Contra);
    CHECK(sym_product(a1, b1).at({0, 0}) == 6);
    CHECK(sym_product(a, b)[0] == 6);

    // rank-1 a: a (.) a equals a (x) a
    DenseTensor u = vec(3, {1, -2, 5}, Var::Contra);
    CHECK(sym_product(u, u) == u.outer(u));

    // n=2 cross case: components 1/2 off-diagonal
    DenseTensor e0 = vec(2, {1, 0}, Var::Contra), e1 = vec(2, {0, 1}, Var::Contra);
    DenseTensor s = sym_product(e0, e1);
    CHECK(s.at({0, 1}) == rat(1, 2));
    CHECK(s.at({1, 0}) == rat(1, 2));
    CHECK(s.at({0, 0}) == 0);
    CHECK(s.at({1, 1}) == 0);

    // against the independent permutation-average oracle
    Rng rng(11);
    DenseTensor x = DenseTensor::zeros(2, 2, Var::Contra);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.small_rat();
    DenseTensor y = vec(2, {3, -1}, Var::Contra);
    CHECK(sym_product(x.symmetrized(), y) == sym_product_oracle(x.symmetrized(), y));

    CHECK_THROWS(sym_product(vec(2, {1, 0}, Var::Contra), vec(3, {1, 0, 0}, Var::Contra)));
    CHECK_THROWS(sym_product(vec(2, {1, 0}, Var::Contra), vec(2, {1, 0}, Var::Co)));
}

TEST_CASE("contract_l decomposable rule") {
    // binom(k,l) <g0,f0>^l f0^(k-l) on decomposables
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        int n = static_cast<int>(rng.uniform(1, 3));
        int k = static_cast<int>(rng.uniform(1, 4));
        int l = static_cast<int>(rng.uniform(1, k));
        DenseTensor g0 = DenseTensor::zeros(n, 1, Var::Co);
        DenseTensor f0 = DenseTensor::zeros(n, 1, Var::Contra);
        for (int i = 0; i < n; ++i) {
            g0[static_cast<std::size_t>(i)] = rng.small_rat();
            f0[static_cast<std::size_t>(i)] = rng.small_rat();
        }
        DenseTensor gl = g0, fk = f0;
        for (int i = 1; i < l; ++i) gl = sym_product(gl, g0);
        for (int i = 1; i < k; ++i) fk = sym_product(fk, f0);
        Rat pairing = 0;
        for (int i = 0; i < n; ++i)
            pairing += g0[static_cast<std::size_t>(i)] * f0[static_cast<std::size_t>(i)];
        DenseTensor expect = DenseTensor::scalar(1, n);
        if (k - l > 0) {
            expect = f0;
            for (int i = 1; i < k - l; ++i) expect = sym_product(expect, f0);
        }
        expect *= Rat(binomial(k, l)) * pow_rat(pairing, l);
        CHECK(contract_l(gl, fk, l) == expect);
    }

    // l = k on decomposables gives <g0,f0>^k
    DenseTensor g0 = vec(3, {1, 2, -1}, Var::Co), f0 = vec(3, {2, 1, 3}, Var::Contra);
    DenseTensor g2 = sym_product(g0, g0), f2 = sym_product(f0, f0);
    CHECK(contract_l(g2, f2, 2)[0] == Rat(1));  // (2+2-3)^2 = 1

    // n=1, k=2, l=1: binom(2,1) * 3 * 2 * 2 = 24
    DenseTensor gs = vec(1, {3}, Var::Co), fs = vec(1, {2}, Var::Contra);
    CHECK(contract_l(gs, sym_product(fs, fs), 1)[0] == 24);

    // error paths
    CHECK_THROWS(contract_l(sym_product(gs, gs), fs, 2));  // l > rank f
    DenseTensor asym = DenseTensor::zeros(2, 2, Var::Contra);
    asym.at({0, 1}) = 1;  // not symmetric
    CHECK_THROWS(contract_l(DenseTensor::minkowski(2, Var::Co), asym, 2));
    CHECK_THROWS(contract_l(vec(2, {1, 1}, Var::Co), vec(3, {1, 1, 1}, Var::Contra), 1));
}

TEST_CASE("project_symmetry") {
    // already admissible tensors are fixed
    SymmetryType sym2 = SymmetryType::symmetric(2);
    DenseTensor t = random_in_symmetry(sym2, 4, 42);
    CHECK(project_symmetry(t, sym2).value == t);

    // symmetric rank 2 at n=4: dimension 10
    CHECK(symmetry_subspace(sym2, 4).subspace_dim() == 10);

    // curvature-type symmetry at n=2: the admissible space is 1-dimensional.
    // Independent oracle: solve the defining linear system on the 16 raw
    // components with a test-local elimination.
    {
        const int n = 2;
        auto flat = [&](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
        Mat rows;
        auto row = [&](std::vector<std::pair<int, Rat>> entries) {
            Vec r(16, Rat(0));
            for (auto [i, c] : entries) r[static_cast<std::size_t>(i)] += c;
            rows.push_back(r);
        };
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        row({{flat(a, b, c, d), 1}, {flat(b, a, c, d), -1}});   // sym (ab)
                        row({{flat(a, b, c, d), 1}, {flat(a, b, d, c), -1}});   // sym (cd)
                        row({{flat(a, b, c, d), 1}, {flat(c, d, a, b), -1}});   // exchange
                        row({{flat(a, b, c, d), 1},                              // cyclic
                             {flat(a, c, d, b), 1},
                             {flat(a, d, b, c), 1}});
                    }
        int oracle_dim = 16 - rank(rows);
        CHECK(oracle_dim == 1);
        CHECK(symmetry_subspace(SymmetryType::curvature(0), 2).subspace_dim() == oracle_dim);
    }

    CHECK_THROWS(project_symmetry(DenseTensor::zeros(4, 3, Var::Contra), sym2));
}

TEST_CASE("random_in_symmetry determinism and membership") {
    // no constraints, rank 0: a random rational scalar
    DenseTensor s = random_in_symmetry(SymmetryType::none(0), 4, 9);
    CHECK(s.rank() == 0);

    // symmetric rank 2 equals its own transpose exactly
    DenseTensor t = random_in_symmetry(SymmetryType::symmetric(2), 4, 10);
    std::vector<int> swap01 = {1, 0};
    CHECK(t.permuted(swap01) == t);
    CHECK(!t.is_zero());

    // seed determinism
    CHECK(random_in_symmetry(SymmetryType::curvature(0), 4, 77) ==
          random_in_symmetry(SymmetryType::curvature(0), 4, 77));
    CHECK(!(random_in_symmetry(SymmetryType::curvature(0), 4, 77) ==
            random_in_symmetry(SymmetryType::curvature(0), 4, 78)));
}

TEST_CASE("rank_of_span") {
    DenseTensor g = DenseTensor::minkowski(4, Var::Co);
    DenseTensor g2 = g;
    g2 *= 2;
    CHECK(rank_of_span({g, g2}) == 1);
    CHECK(rank_of_span({}) == 0);

    // the three eta (x) eta pairings at n=4, rank 4: rank 3.
    // Independent oracle: test-local row reduction over the 256 components.
    DenseTensor ee = g.outer(g);
    std::vector<int> p_acbd = {0, 2, 1, 3}, p_adbc = {0, 2, 3, 1};
    std::vector<DenseTensor> pairings = {ee, ee.permuted(p_acbd), ee.permuted(p_adbc)};
    {
        Mat m;
        for (const auto& p : pairings) m.push_back(flatten_tensor(p));
        // local forward elimination
        int r = 0;
        std::size_t cols = m[0].size();
        for (std::size_t c = 0; c < cols && r < 3; ++c) {
            int piv = -1;
            for (int i = r; i < 3; ++i)
                if (m[static_cast<std::size_t>(i)][c] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(r)]);
            for (int i = r + 1; i < 3; ++i) {
                if (m[static_cast<std::size_t>(i)][c] == 0) continue;
                Rat f = m[static_cast<std::size_t>(i)][c] / m[static_cast<std::size_t>(r)][c];
                for (std::size_t j = c; j < cols; ++j)
                    m[static_cast<std::size_t>(i)][j] -= f * m[static_cast<std::size_t>(r)][j];
            }
            ++r;
        }
        CHECK(r == 3);
    }
    CHECK(rank_of_span(pairings) == 3);
}

TEST_CASE("transform") {
    Rng rng(3);
    DenseTensor t(3, {Var::Contra, Var::Co});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.small_rat();

    Mat id = identity(3);
    CHECK(transform(t, id) == t);

    // the mixed Kronecker tensor is invariant under any invertible map
    DenseTensor delta = DenseTensor::kronecker(3);
    Mat u = {{Rat(1), Rat(2), Rat(0)}, {Rat(0), Rat(1), Rat(0)}, {Rat(3), Rat(0), Rat(1)}};
    CHECK(transform(delta, u) == delta);

    // epsilon at n=2 under diag(1,-1): det -1 flips the sign
    DenseTensor eps = DenseTensor::levi_civita(2, Var::Contra);
    Mat refl = {{Rat(1), Rat(0)}, {Rat(0), Rat(-1)}};
    DenseTensor flipped = eps;
    flipped *= Rat(-1);
    CHECK(transform(eps, refl, Rat(0)) == flipped);

    // errors: singular matrix; density weight with |det| != 1
    Mat sing = {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
    CHECK_THROWS(transform(eps, sing));
    Mat scale2 = {{Rat(2), Rat(0)}, {Rat(0), Rat(1)}};
    CHECK_THROWS(transform(eps, scale2, Rat(1)));
    CHECK_NOTHROW(transform(eps, scale2, Rat(0)));
}

TEST_CASE("multi-index pairing is exact") {
    MultiIndex P{{2, 0, 3}};
    CHECK(P.order() == 5);
    CHECK(P.pair({rat(1, 3), Rat(7), rat(-1, 2)}) == rat(2, 3) - rat(3, 2));
}

TEST_CASE("nullspace and inverse sanity") {
    Mat m = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    auto ns = nullspace(m, 2);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] * 1 + ns[0][1] * 2 == 0);

    Mat a = {{Rat(2), Rat(1)}, {Rat(1), Rat(1)}};
    CHECK(mat_mul(a, invert(a)) == identity(2));
    CHECK(det(a) == 1);
}
