#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wickgen/report.hpp"
#include "wickgen/suites.hpp"
#include "wickgen/endo.hpp"

using namespace wickgen;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("WICKGEN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("WICKGEN_SEED must be an unsigned integer");
        }
    }
    return 1;
}

ModelSpec load_with_flags(const std::string& path, bool allow_inadmissible,
                          const std::string& max_weight) {
    if (!allow_inadmissible) return load_model(path);
    if (max_weight.empty())
        throw InputError("--allow-inadmissible requires --max-weight");
    return load_model(path, true, parse_rat(max_weight));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wickgen: exact enumeration of Wick-power counterterm bases"};
    app.require_subcommand(1);

    std::string model_path, format = "text";
    std::uint64_t seed = 0;  // 0: fall back to WICKGEN_SEED or 1
    int samples = 5;

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "enumerate a counterterm basis");
    std::string component;
    long order = -1;
    int marginal_cap = -1;
    bool allow_inadmissible = false, constant_bg = false;
    std::string max_weight;
    enumerate->add_option("model", model_path, "model file")->required();
    enumerate->add_option("--order", order, "enumerate all components of total order k");
    enumerate->add_option("--component", component, "single component multi-index, e.g. 1,1");
    enumerate->add_option("--marginal-cap", marginal_cap,
                          "marginal dressing cap (-1: deepen until saturation)");
    enumerate->add_option("--samples", samples, "independence samples");
    enumerate->add_option("--seed", seed, "witness seed (default WICKGEN_SEED or 1)");
    enumerate->add_flag("--allow-inadmissible", allow_inadmissible,
                        "accept inadmissible backgrounds (requires --max-weight)");
    enumerate->add_option("--max-weight", max_weight, "explicit weight cap");
    enumerate->add_flag("--constant-backgrounds", constant_bg,
                        "drop terms with differentiated background blocks");
    enumerate->add_option("--format", format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // invariants
    auto* invariants = app.add_subcommand("invariants", "scalar invariant generators of a marginal field");
    std::string field_name;
    int max_degree = 4;
    invariants->add_option("model", model_path, "model file")->required();
    invariants->add_option("--field", field_name, "marginal background field name")->required();
    invariants->add_option("--max-degree", max_degree, "maximum polynomial degree");
    invariants->add_option("--seed", seed, "witness seed");
    invariants->add_option("--format", format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // check
    auto* check = app.add_subcommand("check", "run property suites");
    std::string suite = "all", model_dir = "models";
    int trials = 50;
    check->add_option("--suite", suite, "core|scaling|equivariance|fixtures|all");
    check->add_option("--seed", seed, "suite seed");
    check->add_option("--models", model_dir, "bundled model directory");
    check->add_option("--trials", trials, "equivariance trials per term");
    check->add_option("--samples", samples, "independence samples");

    // expand
    auto* expand = app.add_subcommand("expand", "component expansion of the renormalization formula");
    std::string p_str, coeffs_path, f_path;
    expand->add_option("model", model_path, "model file")->required();
    expand->add_option("--P", p_str, "component multi-index")->required();
    expand->add_option("--coeffs", coeffs_path, "coefficient table file")->required();
    expand->add_option("--f", f_path, "field test-value file")->required();
    expand->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (seed == 0) seed = default_seed();

        if (*enumerate) {
            ModelSpec m = load_with_flags(model_path, allow_inadmissible, max_weight);
            std::vector<MultiIndex> comps;
            if (!component.empty())
                comps.push_back(parse_multi_index(component, m.multiplet.size()));
            else if (order >= 1)
                comps = multi_indices(m.multiplet.size(), order);
            else
                throw InputError("enumerate: --order or --component required");
            EnumerateOptions eo;
            eo.marginal_cap = marginal_cap;
            eo.samples = samples;
            eo.seed = seed;
            eo.constant_backgrounds = constant_bg;
            for (const MultiIndex& Q : comps) {
                ComponentBasis cb = enumerate_component(m, Q, eo);
                if (format == "json")
                    std::cout << basis_report_json(m, cb);
                else
                    std::cout << basis_report_text(m, cb);
            }
            return 0;
        }

        if (*invariants) {
            ModelSpec m = load_model(model_path);
            int bg = -1;
            for (std::size_t j = 0; j < m.backgrounds.size(); ++j)
                if (m.backgrounds[j].name == field_name) bg = static_cast<int>(j);
            if (bg < 0) throw InputError("no background named '" + field_name + "'");
            const BackgroundField& f = m.backgrounds[static_cast<std::size_t>(bg)];
            if (classify(f) != Classification::Marginal)
                throw InputError("field '" + field_name + "' is not marginal");
            if (f.rank == 0) {
                // a marginal scalar is its own (sole) generator
                if (format == "json") {
                    nlohmann::json j;
                    j["schema_version"] = "1";
                    j["field"] = field_name;
                    j["generators"] = {field_name};
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << "generators of invariants of '" << field_name << "': the field itself\n";
                }
                return 0;
            }
            auto basis = scalar_invariant_basis(m, {bg}, max_degree, seed);
            if (format == "json") {
                nlohmann::json j;
                j["schema_version"] = "1";
                j["field"] = field_name;
                j["max_degree"] = max_degree;
                nlohmann::json terms = nlohmann::json::array();
                for (const auto& si : basis)
                    terms.push_back({{"display", si.display}, {"decomposable", si.decomposable}});
                j["invariants"] = terms;
                j["discriminant"] = "det(tr x^{i+j-2})_{i,j=1.." + std::to_string(m.dim) + "}";
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "scalar invariants of '" << field_name << "' up to degree "
                          << max_degree << ":\n";
                for (const auto& si : basis)
                    std::cout << "  " << si.display << (si.decomposable ? "   [product]" : "")
                              << "\n";
                std::cout << "discriminant: det(tr x^{i+j-2}), " << m.dim << "x" << m.dim
                          << " trace Hankel matrix\n";
            }
            return 0;
        }

        if (*check) {
            SuiteOptions so;
            so.seed = seed;
            so.trials = trials;
            so.samples = samples;
            so.model_dir = model_dir;
            auto suites = run_suites(suite, so);
            bool all_ok = true;
            for (const auto& s : suites) {
                std::cout << "suite " << s.name << ": " << s.passed << " passed, " << s.failed
                          << " failed\n";
                for (const auto& f : s.failures) std::cout << "  FAIL " << f << "\n";
                all_ok = all_ok && s.ok();
            }
            return all_ok ? 0 : 1;
        }

        if (*expand) {
            ModelSpec m = load_model(model_path);
            MultipletSpace space;
            space.spacetime_dim = m.dim;
            for (const auto& f : m.multiplet.entries) space.ranks.push_back(f.rank);
            MultiIndex P = parse_multi_index(p_str, m.multiplet.size());

            std::ifstream cf(coeffs_path);
            if (!cf) throw InputError("cannot open coefficient file: " + coeffs_path);
            nlohmann::json cj;
            try {
                cj = nlohmann::json::parse(cf);
            } catch (const nlohmann::json::parse_error& e) {
                throw InputError(std::string("coefficient file: ") + e.what());
            }
            CoefficientTable table(space, static_cast<int>(P.order()));
            for (const auto& entry : cj.at("orders")) {
                int l = entry.at("order").get<int>();
                DenseTensor c = DenseTensor::zeros(space.total_dim(), l, Var::Co);
                const auto& comps = entry.at("components");
                if (comps.size() != c.size())
                    throw InputError("coefficient order " + std::to_string(l) + ": expected " +
                                     std::to_string(c.size()) + " components, got " +
                                     std::to_string(comps.size()));
                for (std::size_t i = 0; i < c.size(); ++i)
                    c[i] = comps[i].is_string() ? parse_rat(comps[i].get<std::string>())
                                                : Rat(comps[i].get<long>());
                table.set_order(l, c.symmetrized());
            }

            std::ifstream ff(f_path);
            if (!ff) throw InputError("cannot open field-value file: " + f_path);
            nlohmann::json fj;
            try {
                fj = nlohmann::json::parse(ff);
            } catch (const nlohmann::json::parse_error& e) {
                throw InputError(std::string("field-value file: ") + e.what());
            }
            std::vector<DenseTensor> fields;
            const auto& fv = fj.at("fields");
            if (static_cast<int>(fv.size()) != space.fields())
                throw InputError("field-value file must list one tensor per multiplet entry");
            for (int i = 0; i < space.fields(); ++i) {
                DenseTensor v = DenseTensor::zeros(space.spacetime_dim,
                                                   space.ranks[static_cast<std::size_t>(i)],
                                                   Var::Contra);
                const auto& comps = fv[static_cast<std::size_t>(i)];
                if (comps.size() != v.size())
                    throw InputError("field " + std::to_string(i) + ": expected " +
                                     std::to_string(v.size()) + " components");
                for (std::size_t c = 0; c < v.size(); ++c)
                    v[c] = comps[c].is_string() ? parse_rat(comps[c].get<std::string>())
                                                : Rat(comps[c].get<long>());
                fields.push_back(std::move(v));
            }

            auto entries = expand_component(space, P, table, fields);
            if (format == "json") {
                std::cout << expansion_report_json(space, P, entries);
            } else {
                std::cout << "expansion of component P=" << P.str() << ":\n";
                for (const auto& e : entries) {
                    std::cout << "  Q=" << e.Q.str() << "  binom=" << e.binomial.get_str()
                              << "  scalar=" << e.scalar.get_str()
                              << (e.leading ? "  [leading]" : "") << "\n";
                }
            }
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
