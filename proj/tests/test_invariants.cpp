#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wickgen/endo.hpp"
#include "wickgen/groups.hpp"

using namespace wickgen;

namespace {

EndoValue diag_endo(std::vector<Rat> lam) {
    Mat m = identity(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) m[i][i] = lam[i];
    return EndoValue(std::move(m));
}

EndoValue random_self_adjoint(int n, std::uint64_t seed) {
    Rng rng(seed);
    DenseTensor xi = DenseTensor::zeros(n, 2, Var::Co);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = rng.small_rat();
    return EndoValue::from_covariant(xi.symmetrized());
}

}  // namespace

TEST_CASE("trace invariants") {
    CHECK(trace_invariants(diag_endo({Rat(1), Rat(1), Rat(1), Rat(1)})) ==
          std::vector<Rat>{Rat(4), Rat(4), Rat(4), Rat(4)});
    CHECK(trace_invariants(diag_endo({Rat(0), Rat(0), Rat(0), Rat(0)})) ==
          std::vector<Rat>{Rat(0), Rat(0), Rat(0), Rat(0)});

    // naive repeated-multiplication oracle
    EndoValue x = random_self_adjoint(4, 17);
    CHECK(x.self_adjoint());
    std::vector<Rat> got = trace_invariants(x);
    for (int p = 1; p <= 4; ++p) {
        Mat acc = identity(4);
        for (int k = 0; k < p; ++k) {
            Mat next(4, Vec(4, Rat(0)));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int l = 0; l < 4; ++l)
                        next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                            acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                            x.matrix()[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            acc = next;
        }
        Rat tr = 0;
        for (int i = 0; i < 4; ++i) tr += acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        CHECK(got[static_cast<std::size_t>(p - 1)] == tr);
    }
}

TEST_CASE("trace reduction via Newton and Cayley-Hamilton") {
    // n=1: tr x^2 = (tr x)^2
    CHECK(reduce_trace(2, {rat(3, 2)}) == rat(9, 4));

    // n=2: tr x^3 = 3/2 tr x tr x^2 - 1/2 (tr x)^3
    for (int it = 0; it < 20; ++it) {
        EndoValue x = random_self_adjoint(2, 100 + static_cast<std::uint64_t>(it));
        auto inv = trace_invariants(x);
        Rat direct = 0;
        Mat m3 = mat_mul(x.matrix(), mat_mul(x.matrix(), x.matrix()));
        for (int i = 0; i < 2; ++i) direct += m3[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        CHECK(reduce_trace(3, inv) == direct);
        CHECK(reduce_trace(3, inv) ==
              rat(3, 2) * inv[0] * inv[1] - rat(1, 2) * inv[0] * inv[0] * inv[0]);
    }

    // out-of-range guards
    CHECK_THROWS(reduce_trace(4, std::vector<Rat>{Rat(1), Rat(2), Rat(0), Rat(1)}));
    CHECK_THROWS(reduce_trace(9, std::vector<Rat>{Rat(1), Rat(2), Rat(0), Rat(1)}));
}

TEST_CASE("discriminant") {
    CHECK(discriminant(diag_endo({Rat(2), Rat(2), Rat(3), Rat(5)})) == 0);
    CHECK(discriminant(diag_endo({Rat(0), Rat(1)})) == 1);

    // det-of-traces equals the eigenvalue product formula
    Rng rng(55);
    for (int it = 0; it < 10; ++it) {
        std::vector<Rat> lam;
        for (int i = 0; i < 4; ++i) lam.push_back(rng.small_rat());
        Rat prod = 1;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                Rat d = lam[static_cast<std::size_t>(i)] - lam[static_cast<std::size_t>(j)];
                prod *= d * d;
            }
        CHECK(discriminant(diag_endo(lam)) == prod);
    }
}

TEST_CASE("discriminant vanishes exactly at repeated roots") {
    // gcd(charpoly, charpoly') oracle
    for (int it = 0; it < 100; ++it) {
        EndoValue x = random_self_adjoint(3, 400 + static_cast<std::uint64_t>(it));
        Poly cp = char_poly(x);
        bool repeated = gcd(cp, cp.derivative()).degree() >= 1;
        CHECK((discriminant(x) == 0) == repeated);
    }
    for (int it = 0; it < 20; ++it) {
        Rng rng(600 + static_cast<std::uint64_t>(it));
        std::vector<Rat> lam = {rng.small_rat(), rng.small_rat(), rng.small_rat(), Rat(0)};
        lam[3] = lam[static_cast<std::size_t>(it % 3)];  // constructed repeated root
        EndoValue x = diag_endo(lam);
        Poly cp = char_poly(x);
        CHECK(discriminant(x) == 0);
        CHECK(gcd(cp, cp.derivative()).degree() >= 1);
    }
}

TEST_CASE("orbit regions") {
    // repeated eigenvalues: the barrier set
    CHECK(orbit_region(diag_endo({Rat(1), Rat(1), Rat(2), Rat(3)})).kind == OrbitRegion::Z0);

    // diagonal with distinct entries: the timelike eigenline is slot 0
    OrbitRegion r1 = orbit_region(diag_endo({Rat(-5), Rat(1), Rat(2), Rat(3)}));
    REQUIRE(r1.kind == OrbitRegion::Real);
    CHECK(r1.timelike_position == 0);  // -5 is the smallest eigenvalue

    // swapping which eigenvalue rides the timelike direction changes the label
    OrbitRegion r2 = orbit_region(diag_endo({Rat(1), Rat(-5), Rat(2), Rat(3)}));
    REQUIRE(r2.kind == OrbitRegion::Real);
    CHECK(r2.timelike_position != 1 - 1);  // eigenvalue -5 now lives on a spacelike line
    CHECK(r1.label != r2.label);

    // rotation-type block with complex eigenvalues
    Mat rot = {{Rat(0), Rat(1)}, {Rat(-1), Rat(0)}};
    EndoValue c(rot);
    CHECK(c.self_adjoint());
    CHECK(orbit_region(c).kind == OrbitRegion::Indeterminate);

    // constancy along Lorentz conjugation orbits
    Rng rng(77);
    EndoValue x = diag_endo({Rat(-2), Rat(1), Rat(4), Rat(7)});
    OrbitRegion base = orbit_region(x);
    for (int i = 0; i < 10; ++i) {
        Mat u = random_lorentz(4, rng, i % 2 == 0);
        EndoValue y(mat_mul(invert(u), mat_mul(x.matrix(), u)));
        CHECK(orbit_region(y).label == base.label);
    }
}

TEST_CASE("scalar invariant basis of a symmetric marginal 2-tensor") {
    ModelSpec m;
    m.dim = 4;
    m.oriented = false;
    m.multiplet.entries = {{"A", 1, Rat(0)}};
    m.backgrounds = {{"m2", 0, Rat(2), FieldSymmetry::General},
                     {"xi", 2, Rat(-2), FieldSymmetry::Symmetric}};

    // degree 0: the constant alone
    auto deg0 = scalar_invariant_basis(m, {1}, 0, 5);
    REQUIRE(deg0.size() == 1);
    CHECK(deg0[0].display == "1");

    // degree 2: tr, tr^2 connected; (tr)^2 decomposable
    auto deg2 = scalar_invariant_basis(m, {1}, 2, 5);
    int connected = 0, products = 0;
    for (const auto& si : deg2) {
        if (si.display == "1") continue;
        if (si.decomposable)
            ++products;
        else
            ++connected;
    }
    CHECK(connected == 2);
    CHECK(products == 1);

    // degree 4: generators tr x, tr x^2, tr x^3, tr x^4 all present
    auto deg4 = scalar_invariant_basis(m, {1}, 4, 5);
    connected = 0;
    for (const auto& si : deg4)
        if (si.display != "1" && !si.decomposable) ++connected;
    CHECK(connected == 4);

    // non-marginal input is rejected
    CHECK_THROWS(scalar_invariant_basis(m, {0}, 2, 5));
}

TEST_CASE("characteristic polynomial and Sturm counts") {
    EndoValue x = diag_endo({Rat(1), Rat(2), Rat(3), Rat(4)});
    Poly cp = char_poly(x);
    CHECK(cp.degree() == 4);
    CHECK(cp.eval(Rat(1)) == 0);
    CHECK(cp.eval(Rat(4)) == 0);
    CHECK(cp.eval(Rat(5)) == 24);  // (5-1)(5-2)(5-3)(5-4)
    CHECK(sturm_count_all(cp) == 4);
    auto roots = isolate_real_roots(cp);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0].first < 1);
    CHECK(roots[0].second >= 1);
}
