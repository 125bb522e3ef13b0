#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wickgen/linalg.hpp"
#include "wickgen/model.hpp"

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

ModelSpec scalar_grad() {
    ModelSpec m;
    m.dim = 4;
    m.oriented = true;
    m.multiplet.entries = {{"phi", 0, Rat(1)}, {"dphi", 1, Rat(1)}};
    m.backgrounds = {{"m2", 0, Rat(2), FieldSymmetry::General},
                     {"xi", 0, Rat(0), FieldSymmetry::General}};
    return m;
}

}  // namespace

TEST_CASE("classification") {
    CHECK(classify({"m2", 0, Rat(2), FieldSymmetry::General}) == Classification::Admissible);
    CHECK(classify({"xi", 0, Rat(0), FieldSymmetry::General}) == Classification::Marginal);
    CHECK(classify({"xi", 2, Rat(-2), FieldSymmetry::Symmetric}) == Classification::Marginal);
    CHECK(classify({"t", 1, rat(-3, 2), FieldSymmetry::General}) == Classification::Inadmissible);
    CHECK(classify({"t", 1, rat(-1, 2), FieldSymmetry::General}) == Classification::Admissible);
}

TEST_CASE("physical degree and target weight") {
    ModelSpec sg = scalar_grad();
    CHECK(physical_degree(sg, MultiIndex{{0, 2}}) == 2);
    CHECK(physical_degree(sg, MultiIndex{{0, 0}}) == 0);
    ModelSpec kg = vector_kg();
    CHECK(physical_degree(kg, MultiIndex{{2}}) == 0);

    CHECK(target_weight(kg, MultiIndex{{2}}) == 2);
    CHECK(target_weight(sg, MultiIndex{{1, 1}}) == 3);

    ModelSpec synth;
    synth.dim = 4;
    synth.multiplet.entries = {{"B", 0, Rat(-2)}};
    CHECK(target_weight(synth, MultiIndex{{1}}) == -2);  // vanishing sector

    CHECK_THROWS(physical_degree(kg, MultiIndex{{1, 1}}));  // length mismatch
}

TEST_CASE("block weights") {
    CHECK(curvature_block_weight(0) == 2);
    BackgroundField xi{"xi", 0, Rat(0), FieldSymmetry::General};
    CHECK(background_block_weight(xi, 1) == 1);
    BackgroundField m2{"m2", 0, Rat(2), FieldSymmetry::General};
    CHECK(background_block_weight(m2, 0) == 2);
    BackgroundField xit{"xi", 2, Rat(-2), FieldSymmetry::Symmetric};
    CHECK(background_block_weight(xit, 0) == 0);
    CHECK(background_block_weight(xit, 1) == 1);
}

TEST_CASE("max derivative order") {
    ModelSpec kg = vector_kg();
    CHECK(max_derivative_order(kg, Rat(2)) == 2);   // two derivatives of the marginal scalar
    CHECK(max_derivative_order(kg, Rat(0)) == 0);
    CHECK(max_derivative_order(kg, Rat(-1)) == -1);
    CHECK(max_derivative_order(kg, rat(7, 2)) == 3);

    ModelSpec bad = kg;
    bad.backgrounds.push_back({"t", 0, Rat(-1), FieldSymmetry::General});
    CHECK_THROWS(max_derivative_order(bad, Rat(2)));
}

TEST_CASE("model validation") {
    ModelSpec kg = vector_kg();
    CHECK_NOTHROW(kg.validate());
    CHECK(kg.all_admissible());

    ModelSpec dup = kg;
    dup.backgrounds.push_back({"m2", 0, Rat(1), FieldSymmetry::General});
    CHECK_THROWS(dup.validate());

    ModelSpec inad = kg;
    inad.backgrounds.push_back({"t", 0, Rat(-1), FieldSymmetry::General});
    CHECK_THROWS(inad.validate());
    inad.allow_inadmissible = true;
    CHECK_THROWS(inad.validate());  // still: cap missing
    inad.explicit_weight_cap = Rat(4);
    CHECK_NOTHROW(inad.validate());

    // digest is stable and sensitive
    CHECK(vector_kg().digest() == vector_kg().digest());
    ModelSpec other = vector_kg();
    other.dim = 5;
    CHECK(other.digest() != kg.digest());
}

TEST_CASE("homogeneity checks") {
    // inverse metric scales with degree 2 under g -> lambda^-2 g
    std::vector<ScalingInput> inputs = {{"g", SymmetryType::symmetric(2), Rat(-2), Var::Co}};
    Evaluator inverse_metric = [](const std::map<std::string, DenseTensor>& in) {
        const DenseTensor& g = in.at("g");
        const int n = g.dim();
        Mat gm(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.at({i, j});
        Mat inv = invert(gm);
        DenseTensor out(n, {Var::Contra, Var::Contra});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.at({i, j}) = inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return out;
    };
    CHECK(check_homogeneity(inverse_metric, inputs, 3, Rat(2), {Rat(2), Rat(3), rat(1, 4)}, 21));
    // wrong degree must fail
    CHECK_FALSE(check_homogeneity(inverse_metric, inputs, 3, Rat(1), {Rat(2)}, 21));

    // constant evaluator has degree 0
    Evaluator c = [](const std::map<std::string, DenseTensor>&) { return DenseTensor::scalar(5, 3); };
    CHECK(check_homogeneity(c, inputs, 3, Rat(0), {Rat(2), Rat(7)}, 22));

    // m2 g^{ab} has degree 4 = 2 + 2
    std::vector<ScalingInput> inputs2 = {{"g", SymmetryType::symmetric(2), Rat(-2), Var::Co},
                                         {"m2", SymmetryType::none(0), Rat(2), Var::Contra}};
    Evaluator prod = [&](const std::map<std::string, DenseTensor>& in) {
        DenseTensor gi = inverse_metric(in);
        gi *= in.at("m2")[0];
        return gi;
    };
    CHECK(check_homogeneity(prod, inputs2, 3, Rat(4), {Rat(2), Rat(3)}, 23));

    // exactness guard: lambda with irrational lambda^degree throws
    CHECK_THROWS(check_homogeneity(c, inputs, 3, rat(1, 2), {Rat(2)}, 24));
    // but a perfect square is fine: 4^(1/2) = 2
    Evaluator half = [](const std::map<std::string, DenseTensor>& in) {
        // a toy evaluator of degree 1/2 in lambda cannot be rational-exact in
        // general; use the constant to probe exponent handling only
        (void)in;
        return DenseTensor::scalar(0, 3);
    };
    CHECK(check_homogeneity(half, inputs, 3, rat(1, 2), {Rat(4), Rat(9)}, 25));
}

TEST_CASE("multi-index enumeration") {
    auto all = multi_indices(2, 2);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == MultiIndex{{0, 2}});
    CHECK(all[1] == MultiIndex{{1, 1}});
    CHECK(all[2] == MultiIndex{{2, 0}});
    CHECK(multi_indices(0, 0).size() == 1);
    CHECK(multi_indices(0, 1).empty());
}
