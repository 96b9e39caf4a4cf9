#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dkap {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    bool include_performance = true;
    unsigned workers = 0;
    // Called after each criterion finishes, e.g. to print progress.
    std::function<void(const CriterionResult&)> on_result;
};

// Runs the full verification matrix, one result per criterion, in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

std::string format_result_line(const CriterionResult& r);

}  // namespace dkap
