#pragma once

#include <string>
#include <vector>

#include "pgc/harness/instance.hpp"

namespace pgc::harness {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;   // deterministic summary: counts and worst residuals
    json residuals = json::object();
};

struct AcceptanceOptions {
    double tol_scale = 1.0;     // every tolerance is multiplied by this; 0 forces failures
    std::vector<int> criteria;  // empty: all of 1..11
    bool timing = false;        // append wall-clock seconds to the report (breaks byte identity)
};

inline constexpr int kCriteria = 11;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
std::string format_report(const std::vector<CriterionResult>& results, bool timing = false);
bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace pgc::harness
