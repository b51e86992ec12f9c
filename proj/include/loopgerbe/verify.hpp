#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loopgerbe/serialize.hpp"

namespace loopgerbe {

enum class VerifyLevel { Quick, Full };

VerifyLevel parse_level(const std::string& s);
std::string level_name(VerifyLevel l);

struct Residual {
    std::string label;
    double value = 0.0;
    double tol = 0.0;
    bool pass = true;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = true;
    std::vector<Residual> residuals;
    std::string error;   ///< exception text if the battery threw
    double seconds = 0.0; ///< wall time; kept out of the JSON report
};

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::Quick;
    std::uint64_t seed = 0;
    /// Evaluate d_tot with the injected sign defect (the suite must fail).
    bool inject_dtot_defect = false;
    /// Criteria to run (1..11); empty runs all of them.
    std::vector<int> only;
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::Quick;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool pass = true;
};

inline constexpr int kBatteryCriteria = 11;

std::string criterion_name(int id);
CriterionResult run_criterion(int id, const VerifyOptions& opts);
/// Runs the numerical battery (criteria 1..11); determinism is checked by
/// comparing the JSON of two runs.
VerifyReport verify_suite(const VerifyOptions& opts);

/// Bit-reproducible report (timings excluded).
Json to_json(const VerifyReport& r);
/// criterion,label,value,tol,pass
std::string residual_csv(const VerifyReport& r);
/// One line per criterion, with timings.
std::string summary_table(const VerifyReport& r);

} // namespace loopgerbe
