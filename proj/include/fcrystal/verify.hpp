#pragma once

// Reproducible end-to-end checks of the closed-form results, shared by the CLI
// and the acceptance binary.

#include <string>
#include <vector>

namespace fcrystal::verify {

struct CheckResult {
    int id = 0;
    std::string label;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

constexpr int kCriterionCount = 13;

std::string criterion_label(int id);
// "all", "k3", "rank2", "quasi-special", "bounds"; throws BadParameters otherwise.
std::vector<int> subset_criteria(const std::string& subset);

CheckResult run_criterion(int id);
std::vector<CheckResult> run_criteria(const std::vector<int>& ids);

}  // namespace fcrystal::verify
