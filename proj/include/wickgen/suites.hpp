#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wickgen/pipeline.hpp"

namespace wickgen {

struct SuiteResult {
    std::string name;
    int passed = 0;
    int failed = 0;
    std::vector<std::string> failures;
    bool ok() const { return failed == 0; }
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int trials = 50;       // equivariance trials per term
    int samples = 5;       // independence samples
    std::string model_dir = "models";
};

/// contraction-algebra identities, projection laws, transform group action,
/// expansion consistency
SuiteResult suite_core(const SuiteOptions& opt);
/// weight calculus, admissibility, homogeneity checks
SuiteResult suite_scaling(const SuiteOptions& opt);
/// per-term equivariance and physical-scaling homogeneity on the bundled
/// model bases
SuiteResult suite_equivariance(const SuiteOptions& opt);
/// bundled-model tables and counting criteria
SuiteResult suite_fixtures(const SuiteOptions& opt);

std::vector<SuiteResult> run_suites(const std::string& which, const SuiteOptions& opt);

/// acceptance criteria, one result per criterion
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};
std::vector<CriterionResult> run_acceptance(const SuiteOptions& opt);

/// exact physical-scaling homogeneity of one term's evaluation
bool term_scaling_ok(const ModelSpec& m, const Term& t, const Rat& expected_degree,
                     std::uint64_t seed);

}  // namespace wickgen
