#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wickgen/expansion.hpp"

using namespace wickgen;

namespace {

MultipletSpace vector_space(int n) {
    MultipletSpace s;
    s.ranks = {1};
    s.spacetime_dim = n;
    return s;
}

}  // namespace

TEST_CASE("multiplet space embedding") {
    MultipletSpace s;
    s.ranks = {0, 1};
    s.spacetime_dim = 4;
    CHECK(s.total_dim() == 5);
    CHECK(s.block_offset(1) == 1);

    DenseTensor f0 = DenseTensor::scalar(3, 4);
    DenseTensor e0 = s.embed(0, f0);
    CHECK(e0[0] == 3);
    CHECK(e0[1] == 0);

    DenseTensor f1 = DenseTensor::zeros(4, 1, Var::Contra);
    f1[2] = 7;
    DenseTensor e1 = s.embed(1, f1);
    CHECK(e1[0] == 0);
    CHECK(e1[3] == 7);

    CHECK_THROWS(s.embed(0, f1));
}

TEST_CASE("order-1 components only carry the leading term") {
    MultipletSpace s = vector_space(4);
    CoefficientTable table(s, 1);
    Rng rng(3);
    std::vector<DenseTensor> f = {DenseTensor::zeros(4, 1, Var::Contra)};
    for (std::size_t i = 0; i < f[0].size(); ++i) f[0][i] = rng.small_rat();
    auto entries = expand_component(s, MultiIndex{{1}}, table, f);
    REQUIRE(entries.size() == 2);
    for (const auto& e : entries) {
        if (e.leading) {
            CHECK(e.binomial == 1);
            CHECK(e.Q == MultiIndex{{1}});
        } else {
            // C_1 = 0 forces the lower entry to vanish
            CHECK(e.scalar == 0);
            CHECK(e.value.is_zero());
        }
    }
}

TEST_CASE("N=1 k=2: the subleading coefficient is C2 fully contracted") {
    MultipletSpace s = vector_space(3);
    CoefficientTable table(s, 2);
    Rng rng(9);
    DenseTensor c2 = DenseTensor::zeros(3, 2, Var::Co);
    for (std::size_t i = 0; i < c2.size(); ++i) c2[i] = rng.small_rat();
    c2 = c2.symmetrized();
    table.set_order(2, c2);

    std::vector<DenseTensor> f = {DenseTensor::zeros(3, 1, Var::Contra)};
    for (std::size_t i = 0; i < f[0].size(); ++i) f[0][i] = rng.small_rat();

    auto entries = expand_component(s, MultiIndex{{2}}, table, f);
    REQUIRE(entries.size() == 3);  // Q = 0, 1, 2
    DenseTensor f2 = sym_product(s.embed(0, f[0]), s.embed(0, f[0]));
    for (const auto& e : entries) {
        if (e.Q == MultiIndex{{0}}) {
            CHECK(e.binomial == 1);
            CHECK(e.scalar == contract_l(c2, f2, 2)[0]);
        }
        if (e.Q == MultiIndex{{1}}) CHECK(e.binomial == 2);  // binom(2,1)
    }
}

TEST_CASE("N=2 mixed components carry unit binomials at Q=0") {
    MultipletSpace s;
    s.ranks = {0, 1};
    s.spacetime_dim = 4;
    CoefficientTable table(s, 2);
    Rng rng(12);
    DenseTensor c2 = DenseTensor::zeros(5, 2, Var::Co);
    for (std::size_t i = 0; i < c2.size(); ++i) c2[i] = rng.small_rat();
    table.set_order(2, c2.symmetrized());

    std::vector<DenseTensor> f;
    f.push_back(DenseTensor::scalar(rng.small_rat(), 4));
    DenseTensor v = DenseTensor::zeros(4, 1, Var::Contra);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.small_rat();
    f.push_back(v);

    auto entries = expand_component(s, MultiIndex{{1, 1}}, table, f);
    DenseTensor fP = sym_product(s.embed(0, f[0]), s.embed(1, f[1]));
    for (const auto& e : entries)
        if (e.Q == MultiIndex{{0, 0}}) {
            CHECK(e.binomial == 1);
            CHECK(e.scalar == contract_l(table.order(2), fP, 2)[0]);
        }
}

TEST_CASE("expansion consistency oracle") {
    CHECK(verify_expansion_consistency(vector_space(1), MultiIndex{{2}}, 4));
    MultipletSpace two;
    two.ranks = {0, 1};
    two.spacetime_dim = 4;
    CHECK(verify_expansion_consistency(two, MultiIndex{{1, 1}}, 5));
    CHECK(verify_expansion_consistency(two, MultiIndex{{2, 1}}, 6));
    CHECK(verify_expansion_consistency(two, MultiIndex{{0, 0}}, 7));  // vacuous
}

TEST_CASE("error paths") {
    MultipletSpace s = vector_space(3);
    CoefficientTable table(s, 3);
    std::vector<DenseTensor> f = {DenseTensor::zeros(3, 1, Var::Contra)};
    // incomplete table: order 2 missing for |P| = 3
    CHECK_THROWS(expand_component(s, MultiIndex{{3}}, table, f));
    // wrong field shape
    CoefficientTable t2(s, 2);
    DenseTensor c2 = DenseTensor::zeros(3, 2, Var::Co);
    t2.set_order(2, c2);
    std::vector<DenseTensor> bad = {DenseTensor::zeros(2, 1, Var::Contra)};
    CHECK_THROWS(expand_component(s, MultiIndex{{2}}, t2, bad));
    // order-1 coefficients cannot be set
    CHECK_THROWS(t2.set_order(1, DenseTensor::zeros(3, 1, Var::Co)));
    // asymmetric coefficient rejected
    DenseTensor asym = DenseTensor::zeros(3, 2, Var::Co);
    asym.at({0, 1}) = 1;
    CHECK_THROWS(t2.set_order(2, asym));
}
