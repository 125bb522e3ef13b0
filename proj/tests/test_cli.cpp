#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "wickgen/report.hpp"

using namespace wickgen;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cmd(const std::string& cmd_line) {
    std::string cmd = cmd_line + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (fgets(buf.data(), static_cast<int>(buf.size()), p)) out += buf.data();
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

RunResult run(const std::string& args) {
    return run_cmd(std::string(WICKGEN_CLI_PATH) + " " + args);
}

std::string model_path(const std::string& name) {
    return std::string(WICKGEN_MODEL_DIR) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/wickgen_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("model loading") {
    ModelSpec m = load_model(model_path("vectorkg4.model"));
    CHECK(m.dim == 4);
    CHECK(m.oriented);
    REQUIRE(m.multiplet.size() == 1);
    CHECK(m.multiplet.entries[0].rank == 1);
    CHECK(m.multiplet.entries[0].degree == 0);
    REQUIRE(m.backgrounds.size() == 2);
    CHECK(classify(m.backgrounds[0]) == Classification::Admissible);
    CHECK(classify(m.backgrounds[1]) == Classification::Marginal);

    // inadmissible background without a cap: rejected with a diagnostic
    std::string bad = R"({"dim":4,"oriented":false,
        "fields":[{"name":"A","rank":0,"degree":"0"}],
        "backgrounds":[{"name":"t","rank":0,"degree":"-1"}]})";
    CHECK_THROWS_AS(load_model_text(bad), InputError);
    CHECK_NOTHROW(load_model_text(bad, true, Rat(3)));

    // parse errors carry location hints
    try {
        load_model_text(R"({"dim":4,"fields":[{"name":"A","rank":1}]})");
        CHECK(false);
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("fields[0]") != std::string::npos);
    }

    // exact rational degree strings
    ModelSpec half = load_model_text(R"({"dim":4,
        "fields":[{"name":"A","rank":1,"degree":"-1/2"}],"backgrounds":[]})");
    CHECK(half.multiplet.entries[0].degree == rat(-1, 2));
}

TEST_CASE("cli enumerate: json report replays byte-identically") {
    std::string args = "enumerate " + model_path("vectorkg4.model") +
                       " --component 2 --seed 12 --format json";
    RunResult a = run(args);
    RunResult b = run(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    json doc = json::parse(a.out);
    CHECK(doc["schema_version"] == "1");
    CHECK(doc["terms"].size() == 7);
    CHECK(doc["witness"]["seed"] == 12);
    CHECK(doc["vanishing"] == false);

    // round trip: parse(serialize(report)) is stable
    CHECK(json::parse(doc.dump(2)) == doc);
}

TEST_CASE("cli enumerate: text format and order iteration") {
    RunResult r = run("enumerate " + model_path("scalargrad4.model") + " --order 2 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Q=(0,2)") != std::string::npos);
    CHECK(r.out.find("Q=(1,1)") != std::string::npos);
    CHECK(r.out.find("Q=(2,0)") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    // missing file: input error
    CHECK(run("enumerate /nonexistent.model --order 2").exit_code == 2);

    // malformed model
    std::string bad = write_temp("bad.model", "{ not json");
    CHECK(run("enumerate " + bad + " --order 2").exit_code == 2);

    // inadmissible background without the cap flags
    std::string inad = write_temp("inad.model", R"({"dim":4,
        "fields":[{"name":"A","rank":1,"degree":"0"}],
        "backgrounds":[{"name":"t","rank":0,"degree":"-1"}]})");
    RunResult r = run("enumerate " + inad + " --order 1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("inadmissible") != std::string::npos);

    // vanishing sector: exit 0 with an empty report
    std::string vanish = write_temp("vanish.model", R"({"dim":4,
        "fields":[{"name":"B","rank":0,"degree":"-2"}],
        "backgrounds":[]})");
    RunResult v = run("enumerate " + vanish + " --component 1 --format json");
    CHECK(v.exit_code == 0);
    json doc = json::parse(v.out);
    CHECK(doc["vanishing"] == true);
    CHECK(doc["terms"].empty());
}

TEST_CASE("cli seed handling") {
    // WICKGEN_SEED is honored when --seed is absent, --seed wins otherwise
    std::string args = "enumerate " + model_path("vectorkg4.model") + " --component 2 --format json";
    RunResult env_run = run_cmd("env WICKGEN_SEED=99 " + std::string(WICKGEN_CLI_PATH) + " " + args);
    REQUIRE(env_run.exit_code == 0);
    CHECK(json::parse(env_run.out)["witness"]["seed"] == 99);

    RunResult flag_run =
        run_cmd("env WICKGEN_SEED=99 " + std::string(WICKGEN_CLI_PATH) + " " + args + " --seed 3");
    REQUIRE(flag_run.exit_code == 0);
    CHECK(json::parse(flag_run.out)["witness"]["seed"] == 3);
}

TEST_CASE("cli invariants subcommand") {
    // marginal scalar reports itself
    RunResult s = run("invariants " + model_path("vectorkg4.model") + " --field xi");
    CHECK(s.exit_code == 0);
    CHECK(s.out.find("the field itself") != std::string::npos);

    // non-marginal field is an input error
    CHECK(run("invariants " + model_path("vectorkg4.model") + " --field m2").exit_code == 2);

    // marginal tensor: trace generators up to the requested degree
    RunResult t = run("invariants " + model_path("vectorkg4-tensorxi.model") +
                      " --field xi --max-degree 3 --format json");
    CHECK(t.exit_code == 0);
    json doc = json::parse(t.out);
    int connected = 0;
    for (const auto& e : doc["invariants"])
        if (e["display"] != "1" && e["decomposable"] == false) ++connected;
    CHECK(connected == 3);  // tr, tr^2, tr^3
}

TEST_CASE("cli expand subcommand") {
    // identity expansion at order 1
    std::string coeffs = write_temp("c1.json", R"({"orders":[]})");
    std::string fields = write_temp("f1.json", R"({"fields":[["1","0","0","2"]]})");
    RunResult r = run("expand " + model_path("vectorkg4.model") +
                      " --P 1 --coeffs " + coeffs + " --f " + fields + " --format json");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    bool found_leading = false;
    for (const auto& e : doc["entries"]) {
        if (e["leading"] == true) found_leading = true;
        else CHECK(e["scalar"] == "0");  // C_1 = 0
    }
    CHECK(found_leading);

    // malformed coefficient file: exit 2
    std::string badc = write_temp("cbad.json", "{");
    CHECK(run("expand " + model_path("vectorkg4.model") + " --P 1 --coeffs " + badc + " --f " +
              fields)
              .exit_code == 2);
}

TEST_CASE("expected-term fixtures load against their models") {
    ModelSpec kg = load_model(model_path("vectorkg4.model"));
    auto terms = load_expected_terms(model_path("vectorkg4.expected.json"), kg, MultiIndex{{2}});
    CHECK(terms.size() == 7);

    ModelSpec sg = load_model(model_path("scalargrad4.model"));
    CHECK(load_expected_terms(model_path("scalargrad4.expected.json"), sg, MultiIndex{{2, 0}})
              .size() == 4);
    CHECK(load_expected_terms(model_path("scalargrad4.expected.json"), sg, MultiIndex{{1, 1}})
              .size() == 9);
    CHECK(load_expected_terms(model_path("scalargrad4.expected.json"), sg, MultiIndex{{0, 2}})
              .size() == 27);

    ModelSpec txi = load_model(model_path("vectorkg4-tensorxi.model"));
    CHECK(load_expected_terms(model_path("vectorkg4-tensorxi.expected.json"), txi, MultiIndex{{2}})
              .size() == 20);
    CHECK(load_expected_terms(model_path("vectorkg4-tensorxi.rejected.json"), txi, MultiIndex{{2}})
              .size() == 4);
}
