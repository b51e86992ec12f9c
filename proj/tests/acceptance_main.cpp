// Acceptance battery: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <string>

#include "loopgerbe/verify.hpp"

using namespace loopgerbe;

namespace {

// Wall-clock budgets in seconds, criteria 1..11.
constexpr double kBudget[kBatteryCriteria] = {5, 10, 5, 30, 30, 180, 120, 120, 60, 60, 120};

double worst_ratio(const CriterionResult& c)
{
    double w = 0.0;
    for (const auto& r : c.residuals) {
        if (r.tol > 0.0) {
            w = std::max(w, r.value / r.tol);
        } else if (r.value != 0.0) {
            w = std::max(w, 1e300);
        }
    }
    return w;
}

} // namespace

int main()
{
    VerifyOptions full;
    full.level = VerifyLevel::Full;
    bool all = true;
    for (int id = 1; id <= kBatteryCriteria; ++id) {
        auto c = run_criterion(id, full);
        bool in_time = c.seconds < kBudget[id - 1];
        bool ok = c.pass && in_time;
        all = all && ok;
        std::printf("criterion %2d: %s  %-38s checks %zu, worst residual/tol %.3e, %.2f s (budget %.0f s)%s%s\n", id,
                    ok ? "PASS" : "FAIL", c.name.c_str(), c.residuals.size(), worst_ratio(c), c.seconds, kBudget[id - 1],
                    c.error.empty() ? "" : "  error: ", c.error.c_str());
        for (const auto& r : c.residuals) {
            if (!r.pass) {
                std::printf("              failed: %s = %.6e (tol %.1e)\n", r.label.c_str(), r.value, r.tol);
            }
        }
        std::fflush(stdout);
    }

    VerifyOptions quick;
    auto start = std::chrono::steady_clock::now();
    auto first = verify_suite(quick);
    double t1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto second = verify_suite(quick);
    bool identical = to_json(first).dump() == to_json(second).dump();
    bool ok12 = identical && first.pass && t1 < 60.0;
    all = all && ok12;
    std::printf("criterion 12: %s  %-38s quick JSON %s across two runs, quick %s, %.2f s (budget 60 s)\n",
                ok12 ? "PASS" : "FAIL", criterion_name(12).c_str(), identical ? "bit-identical" : "DIFFERS",
                first.pass ? "all pass" : "has failures", t1);
    std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
    return all ? 0 : 1;
}
