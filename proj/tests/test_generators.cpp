#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "wickgen/blocks.hpp"

using namespace wickgen;

namespace {

ModelSpec vector_kg() {
    ModelSpec m;
    m.dim = 4;
    m.oriented = true;
    m.multiplet.entries = {{"A", 1, Rat(0)}};
    m.backgrounds = {{"m2", 0, Rat(2), FieldSymmetry::General},
                     {"xi", 0, Rat(0), FieldSymmetry::General}};
    return m;
}

ModelSpec tensor_xi() {
    ModelSpec m = vector_kg();
    m.backgrounds[1] = {"xi", 2, Rat(-2), FieldSymmetry::Symmetric};
    return m;
}

// independent oracle: enumerate exponent vectors over the catalog satisfying
// the weight equation, count the resulting multisets
long monomial_count_oracle(const BlockCatalog& cat, const Rat& W, int marginal_cap) {
    long bare = 0;
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t i, Rat rem) {
        if (rem == 0) {
            ++bare;
            return;
        }
        if (i == cat.weighted.size()) return;
        // exponent of block i from 0 upward
        for (Rat used = 0; used <= rem; used += cat.weighted[i].coord_weight) {
            rec(i + 1, rem - used);
            if (cat.weighted[i].coord_weight == 0) break;
        }
    };
    rec(0, W);
    // marginal dressings: multisets of size 0..cap over cat.marginal kinds
    long dressings = 0;
    std::function<void(std::size_t, int)> dress = [&](std::size_t i, int budget) {
        ++dressings;
        if (budget == 0) return;
        for (std::size_t j = i; j < cat.marginal.size(); ++j) dress(j, budget - 1);
    };
    dress(0, marginal_cap);
    return bare * dressings;
}

}  // namespace

TEST_CASE("block catalog for the vector model") {
    ModelSpec m = vector_kg();
    BlockCatalog cat = catalog_blocks(m, Rat(2));
    // expected: S(0) w2, m2 w2, grad xi w1, gradgrad xi w2; marginal empty
    REQUIRE(cat.weighted.size() == 4);
    CHECK(cat.marginal.empty());
    std::multiset<std::string> weights;
    for (const auto& b : cat.weighted)
        weights.insert(b.name + ":" + b.coord_weight.get_str() + ":" + std::to_string(b.derivs));
    CHECK(weights.count("S:2:0") == 1);
    CHECK(weights.count("m2:2:0") == 1);
    CHECK(weights.count("xi:1:1") == 1);
    CHECK(weights.count("xi:2:2") == 1);

    // W = 0: no positive-weight blocks
    CHECK(catalog_blocks(m, Rat(0)).weighted.empty());

    // the scalar marginal never becomes an undifferentiated block
    for (const auto& b : cat.weighted) {
        CHECK(b.coord_weight > 0);
        if (b.name == "xi") CHECK(b.derivs > 0);
    }
}

TEST_CASE("block catalog with a marginal tensor") {
    ModelSpec m = tensor_xi();
    BlockCatalog cat = catalog_blocks(m, Rat(2));
    REQUIRE(cat.marginal.size() == 1);
    CHECK(cat.marginal[0].rank == 2);
    CHECK(cat.marginal[0].marginal);
    CHECK(cat.marginal[0].coord_weight == 0);
    std::multiset<std::string> weights;
    for (const auto& b : cat.weighted)
        weights.insert(b.name + ":" + b.coord_weight.get_str() + ":" + std::to_string(b.derivs));
    CHECK(weights.count("xi:1:1") == 1);  // grad xi_ab, rank 3
    CHECK(weights.count("xi:2:2") == 1);  // gradgrad xi_ab, rank 4
    CHECK(weights.count("S:2:0") == 1);
    CHECK(weights.count("m2:2:0") == 1);

    // curvature block structure
    BlockDescriptor s1 = make_curvature_block(1);
    CHECK(s1.rank == 5);
    CHECK(s1.coord_weight == 3);
    CHECK(s1.phys_weight == 8);
}

TEST_CASE("monomial enumeration for the vector model") {
    ModelSpec m = vector_kg();
    auto monos = enumerate_monomials(m, MultiIndex{{2}}, 0);
    REQUIRE(monos.size() == 4);  // {S}, {m2}, {gradgrad xi}, {grad xi, grad xi}
    std::multiset<std::size_t> sizes;
    for (const auto& mo : monos) {
        sizes.insert(mo.blocks.size());
        CHECK(mo.total_weight == 2);
        Rat sum = 0;
        for (const auto& b : mo.blocks) sum += b.coord_weight;
        CHECK(sum == 2);
    }
    CHECK(sizes == std::multiset<std::size_t>{1, 1, 1, 2});

    // W < 0: empty; W = 0: exactly the empty monomial
    ModelSpec synth = m;
    synth.multiplet.entries[0].degree = Rat(-3);
    CHECK(enumerate_monomials(synth, MultiIndex{{1}}, 0).empty());
    synth.multiplet.entries[0].degree = Rat(-1);
    auto zero = enumerate_monomials(synth, MultiIndex{{1}}, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].blocks.empty());
    CHECK(zero[0].marginal_blocks.empty());
}

TEST_CASE("completeness against the exponent-vector oracle") {
    for (int variant = 0; variant < 2; ++variant) {
        ModelSpec m = variant == 0 ? vector_kg() : tensor_xi();
        for (long w = 0; w <= 4; ++w) {
            BlockCatalog cat = catalog_blocks(m, Rat(w));
            for (int cap = 0; cap <= 2; ++cap) {
                auto monos = enumerate_monomials_for_weight(m, Rat(w), cap);
                CHECK(static_cast<long>(monos.size()) ==
                      monomial_count_oracle(cat, Rat(w), cap));
            }
        }
    }
}

TEST_CASE("marginal cap monotonicity and derivative bound") {
    ModelSpec m = tensor_xi();
    auto small = enumerate_monomials(m, MultiIndex{{2}}, 1);
    auto large = enumerate_monomials(m, MultiIndex{{2}}, 3);
    std::set<std::string> small_keys, large_keys;
    for (const auto& mo : small) small_keys.insert(mo.key());
    for (const auto& mo : large) large_keys.insert(mo.key());
    CHECK(small_keys.size() == small.size());
    for (const auto& k : small_keys) CHECK(large_keys.count(k) == 1);
    CHECK(large_keys.size() > small_keys.size());

    long bound = max_derivative_order(m, target_weight(m, MultiIndex{{2}}));
    for (const auto& mo : large)
        for (const auto& b : mo.all_blocks()) CHECK(b.derivs <= bound);
}

TEST_CASE("duplicate blocks share values by key") {
    ModelSpec m = vector_kg();
    auto monos = enumerate_monomials(m, MultiIndex{{2}}, 0);
    const Monomial* pair = nullptr;
    for (const auto& mo : monos)
        if (mo.blocks.size() == 2) pair = &mo;
    REQUIRE(pair != nullptr);
    CHECK(pair->blocks[0].key() == pair->blocks[1].key());
}
