// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include "fcrystal/verify.hpp"

#include <cstdio>

int main() {
    using namespace fcrystal::verify;
    int failed = 0;
    for (int id = 1; id <= kCriterionCount; ++id) {
        const CheckResult r = run_criterion(id);
        std::printf("[%s] %2d  %s  (%.2f s)  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.label.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    std::printf("%d/%d criteria passed\n", kCriterionCount - failed, kCriterionCount);
    return failed == 0 ? 0 : 1;
}
