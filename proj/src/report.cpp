#include "wickgen/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wickgen {

using nlohmann::json;

namespace {

Rat json_rat(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rat(j.get<std::string>());
        } catch (const std::exception& e) {
            throw InputError(where + ": " + e.what());
        }
    }
    throw InputError(where + ": expected an integer or an exact \"p/q\" string");
}

}  // namespace

ModelSpec load_model_text(const std::string& text, bool allow_inadmissible,
                          const Rat& weight_cap) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("model parse error: ") + e.what());
    }
    ModelSpec m;
    m.allow_inadmissible = allow_inadmissible;
    m.explicit_weight_cap = weight_cap;
    if (!doc.is_object()) throw InputError("model: top-level object expected");
    if (doc.contains("schema_version") && doc["schema_version"] != "1")
        throw InputError("model: unsupported schema_version");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw InputError("model: integer 'dim' required");
    m.dim = doc["dim"].get<int>();
    m.oriented = doc.value("oriented", false);
    if (!doc.contains("fields") || !doc["fields"].is_array())
        throw InputError("model: array 'fields' required");
    int fi = 0;
    for (const auto& f : doc["fields"]) {
        std::string where = "fields[" + std::to_string(fi++) + "]";
        if (!f.contains("name") || !f.contains("rank") || !f.contains("degree"))
            throw InputError(where + ": name, rank, degree required");
        DynamicalField d;
        d.name = f["name"].get<std::string>();
        d.rank = f["rank"].get<int>();
        d.degree = json_rat(f["degree"], where + ".degree");
        m.multiplet.entries.push_back(std::move(d));
    }
    int bi = 0;
    for (const auto& b : doc.value("backgrounds", json::array())) {
        std::string where = "backgrounds[" + std::to_string(bi++) + "]";
        if (!b.contains("name") || !b.contains("rank") || !b.contains("degree"))
            throw InputError(where + ": name, rank, degree required");
        BackgroundField f;
        f.name = b["name"].get<std::string>();
        f.rank = b["rank"].get<int>();
        f.degree = json_rat(b["degree"], where + ".degree");
        std::string sym = b.value("symmetry", "general");
        if (sym == "symmetric")
            f.symmetry = FieldSymmetry::Symmetric;
        else if (sym == "general")
            f.symmetry = FieldSymmetry::General;
        else
            throw InputError(where + ".symmetry: 'general' or 'symmetric' expected");
        if (f.rank >= 2 && f.symmetry == FieldSymmetry::General)
            throw InputError(where + ": only symmetric tensor backgrounds are supported for rank >= 2");
        m.backgrounds.push_back(std::move(f));
    }
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw InputError(std::string("model: ") + e.what());
    }
    return m;
}

ModelSpec load_model(const std::string& path, bool allow_inadmissible, const Rat& weight_cap) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_text(ss.str(), allow_inadmissible, weight_cap);
}

std::string term_to_json(const Term& t) {
    json j;
    json blocks = json::array();
    for (const auto& b : t.monomial.all_blocks()) {
        json jb;
        jb["kind"] = b.kind == BlockKind::CurvatureS ? "S" : "background";
        if (b.kind == BlockKind::Background) jb["field"] = b.name;
        jb["derivs"] = b.derivs;
        jb["rank"] = b.rank;
        blocks.push_back(jb);
    }
    j["blocks"] = blocks;
    j["epsilon"] = t.epsilon;
    json pairs = json::array();
    for (auto [a, b] : t.pairs) pairs.push_back(json::array({a, b}));
    j["pairs"] = pairs;
    j["scheme"] = t.scheme_key;
    return j.dump();
}

namespace {

json component_json(const ModelSpec& m, const ComponentBasis& cb) {
    json j;
    j["schema_version"] = "1";
    j["model_digest"] = m.digest();
    json q = json::array();
    for (long e : cb.Q.entries) q.push_back(e);
    j["Q"] = q;
    j["W"] = cb.W.get_str();
    j["vanishing"] = cb.vanishing;
    j["monomial_count"] = cb.monomials.size();
    j["marginal_cap"] = cb.marginal_cap_used;
    j["saturation_flagged"] = cb.saturation_flagged;
    json terms = json::array();
    for (std::size_t i = 0; i < cb.basis.terms.size(); ++i) {
        json t;
        t["display"] = cb.rendered[i];
        t["machine"] = json::parse(term_to_json(cb.basis.terms[i]));
        terms.push_back(t);
    }
    j["terms"] = terms;
    j["witness"] = {{"seed", cb.basis.witness.seed},
                    {"samples", cb.basis.witness.samples},
                    {"marginal_witnesses", cb.basis.witness.marginal_witnesses},
                    {"marginal_mode", cb.basis.witness.marginal_mode}};
    j["work"] = {{"candidate_terms", cb.work.candidate_terms},
                 {"evaluations", cb.work.evaluations},
                 {"monomials", cb.work.monomials}};
    return j;
}

}  // namespace

std::string basis_report_json(const ModelSpec& m, const ComponentBasis& cb) {
    return component_json(m, cb).dump(2) + "\n";
}

std::string basis_report_text(const ModelSpec& m, const ComponentBasis& cb) {
    std::ostringstream os;
    os << "component Q=" << cb.Q.str() << "  W=" << cb.W.get_str();
    if (cb.vanishing) {
        os << "  vanishing sector: exactly zero\n";
        return os.str();
    }
    os << "  monomials=" << cb.monomials.size() << "  terms=" << cb.basis.terms.size();
    if (cb.marginal_cap_used > 0) os << "  marginal_cap=" << cb.marginal_cap_used;
    if (cb.saturation_flagged) os << "  [saturation ceiling hit before stabilization]";
    os << "\n";
    for (std::size_t i = 0; i < cb.basis.terms.size(); ++i)
        os << "  [" << i + 1 << "] " << cb.rendered[i] << "\n";
    os << "  witness: seed=" << cb.basis.witness.seed << " samples=" << cb.basis.witness.samples;
    if (cb.basis.witness.marginal_mode)
        os << " marginal_witnesses=" << cb.basis.witness.marginal_witnesses;
    os << "\n";
    return os.str();
}

std::vector<FixtureTerm> load_expected_terms(const std::string& path, const ModelSpec& m,
                                             const MultiIndex& Q) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open expected-terms file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("expected-terms parse error: ") + e.what());
    }
    OutputSignature sig = OutputSignature::for_component(m, Q);
    json terms_doc;
    if (doc.contains("components")) {
        const auto& comps = doc["components"];
        if (!comps.contains(Q.str()))
            throw InputError("expected-terms: no component " + Q.str() + " in " + path);
        terms_doc = comps[Q.str()].at("terms");
    } else {
        terms_doc = doc.at("terms");
    }
    std::vector<FixtureTerm> out;
    for (const auto& jt : terms_doc) {
        Monomial mono;
        std::vector<std::string> letters;
        std::vector<std::pair<BlockDescriptor, std::string>> withs;
        std::string eps = jt.value("eps", "");
        for (const auto& jf : jt.at("factors")) {
            std::string kind = jf.at("block").get<std::string>();
            std::string idx = jf.value("idx", "");
            if (kind == "eta") {
                // bare metric factor: realized by leaving those output
                // letters unpaired (make_term pairs leftovers), so skip
                continue;
            }
            int derivs = jf.value("derivs", 0);
            BlockDescriptor b;
            if (kind == "S") {
                b = make_curvature_block(derivs);
            } else {
                int bg = -1;
                for (std::size_t j = 0; j < m.backgrounds.size(); ++j)
                    if (m.backgrounds[j].name == kind) bg = static_cast<int>(j);
                if (bg < 0) throw InputError("expected-terms: unknown background '" + kind + "'");
                b = make_background_block(m, bg, derivs);
            }
            withs.push_back({b, idx});
        }
        // split into weighted and marginal positions, then reorder the index
        // strings to the canonical all_blocks order (stable sort by key)
        std::stable_sort(withs.begin(), withs.end(),
                         [](const auto& a, const auto& b2) { return a.first < b2.first; });
        std::vector<std::pair<BlockDescriptor, std::string>> weighted, marginal;
        for (auto& [b, idx] : withs)
            (b.marginal ? marginal : weighted).push_back({b, idx});
        for (auto& [b, idx] : weighted) {
            mono.blocks.push_back(b);
            letters.push_back(idx);
        }
        for (auto& [b, idx] : marginal) {
            mono.marginal_blocks.push_back(b);
            letters.push_back(idx);
        }
        mono.total_weight = 0;
        for (const auto& b : mono.blocks) mono.total_weight += b.coord_weight;
        FixtureTerm ft;
        ft.term = make_term(mono, sig, letters, m.dim, eps);
        ft.label = jt.value("label", "");
        out.push_back(std::move(ft));
    }
    return out;
}

std::string expansion_report_json(const MultipletSpace& space, const MultiIndex& P,
                                  const std::vector<ExpansionTerm>& entries) {
    json j;
    j["schema_version"] = "1";
    json p = json::array();
    for (long e : P.entries) p.push_back(e);
    j["P"] = p;
    j["fiber_dim"] = space.total_dim();
    json es = json::array();
    for (const auto& e : entries) {
        json je;
        json q = json::array();
        for (long v : e.Q.entries) q.push_back(v);
        je["Q"] = q;
        je["binomial"] = e.binomial.get_str();
        je["scalar"] = e.scalar.get_str();
        je["leading"] = e.leading;
        json comps = json::array();
        for (std::size_t i = 0; i < e.value.size(); ++i) comps.push_back(e.value[i].get_str());
        je["value"] = comps;
        es.push_back(je);
    }
    j["entries"] = es;
    return j.dump(2) + "\n";
}

MultiIndex parse_multi_index(const std::string& s, int expected_len) {
    MultiIndex q;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            q.entries.push_back(std::stol(tok));
        } catch (const std::exception&) {
            throw InputError("bad multi-index entry: '" + tok + "'");
        }
    }
    if (expected_len >= 0 && static_cast<int>(q.entries.size()) != expected_len)
        throw InputError("multi-index length " + std::to_string(q.entries.size()) +
                         " does not match the multiplet (" + std::to_string(expected_len) + ")");
    for (long e : q.entries)
        if (e < 0) throw InputError("multi-index entries must be non-negative");
    return q;
}

}  // namespace wickgen
