#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hypac {

struct CriterionResult {
    int id = 0;
    std::string claim;
    std::string measured;
    std::string tolerance;
    bool passed = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;  ///< runtime limit, part of the pass condition
};

struct VerifyOptions {
    /// Reduced resolutions throughout; tolerances are unchanged.
    bool quick = false;
    /// Subset of criterion ids to run (all when empty). Criterion 10 uses the
    /// profiles of whichever criteria ran.
    std::vector<int> only;
    /// Called after each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

/// Runs the acceptance criteria in order. Solver exceptions inside a criterion
/// are caught and reported as a failed row carrying the message.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts = {});

/// `[PASS] <id>. <claim>: <measured> (tolerance <tol>, <s> s)`.
std::string format_result_line(const CriterionResult& r);

}  // namespace hypac
