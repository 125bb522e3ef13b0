// Acceptance suite: runs every criterion at its stated tolerance (exact
// arithmetic throughout) and prints one pass/fail line per criterion.
#include <cstdio>
#include <cstdlib>

#include "wickgen/suites.hpp"

int main(int argc, char** argv) {
    wickgen::SuiteOptions opt;
    opt.model_dir = WICKGEN_MODEL_DIR;
    opt.seed = 1;
    opt.trials = 50;
    if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);

    auto results = wickgen::run_acceptance(opt);
    bool all_ok = true;
    for (const auto& c : results) {
        std::printf("[%s] criterion %d: %s (%.2fs) %s\n", c.passed ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.seconds, c.detail.c_str());
        all_ok = all_ok && c.passed;
    }
    return all_ok ? 0 : 1;
}
