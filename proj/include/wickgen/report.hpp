#pragma once

#include <string>

#include "wickgen/expansion.hpp"
#include "wickgen/pipeline.hpp"

namespace wickgen {

/// Thrown on malformed input files; the CLI maps it to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse a model document (JSON: dim, oriented, fields[], backgrounds[];
/// degrees as exact "p/q" strings). Throws InputError with a location hint.
/// Inadmissible backgrounds are rejected unless allow_inadmissible is set
/// together with a non-negative weight cap.
ModelSpec load_model_text(const std::string& text, bool allow_inadmissible = false,
                          const Rat& weight_cap = Rat(-1));
ModelSpec load_model(const std::string& path, bool allow_inadmissible = false,
                     const Rat& weight_cap = Rat(-1));

/// machine-readable term encoding (blocks + slot pairing), embeddable in
/// reports and expected-term fixtures
std::string term_to_json(const Term& t);

struct FixtureTerm {
    Term term;
    std::string label;
};
/// Expected-term documents: {"terms": [{"label", "factors":[{"block","derivs",
/// "idx"}...], "eps": "..."}]}; factors reference background names, "S", or
/// "eta"; idx letters follow the make_term convention.
std::vector<FixtureTerm> load_expected_terms(const std::string& path, const ModelSpec& m,
                                             const MultiIndex& Q);

/// versioned BasisReport document (schema_version "1")
std::string basis_report_json(const ModelSpec& m, const ComponentBasis& cb);
std::string basis_report_text(const ModelSpec& m, const ComponentBasis& cb);

std::string expansion_report_json(const MultipletSpace& space, const MultiIndex& P,
                                  const std::vector<ExpansionTerm>& entries);

/// parse a multi-index "1,0,2"
MultiIndex parse_multi_index(const std::string& s, int expected_len);

}  // namespace wickgen
