// Acceptance runner: one line per criterion, exit status 1 if any fails.
// Arguments: --quick, or criterion ids to restrict the run.
#include "hypac/verify.hpp"

#include <cstdio>
#include <cstring>
#include <string>

int main(int argc, char** argv) {
    hypac::VerifyOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            opts.quick = true;
        } else {
            opts.only.push_back(std::stoi(argv[i]));
        }
    }
    opts.on_result = [](const hypac::CriterionResult& r) {
        std::printf("%s\n", hypac::format_result_line(r).c_str());
        std::fflush(stdout);
    };
    const auto results = hypac::run_acceptance(opts);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
