#ifndef SSM_ACCEPTANCE_HPP
#define SSM_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ssm {

// One verification criterion of the release battery.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured numbers, thresholds, notes
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;  // CSV payload
};

struct SuiteConfig {
    std::uint64_t seed = 7;
    std::uint64_t mc_paths = 100000;
    bool quick = false;  // reduced path counts for smoke runs
    std::function<void(const CriterionResult&)> on_result;  // progress callback
};

// Runs the full battery (10 criteria) and returns per-criterion results.
std::vector<CriterionResult> run_acceptance_suite(const SuiteConfig& cfg);

// Deterministic CSV of suite metrics (17 significant digits, '.' separator).
std::string suite_results_csv(const std::vector<CriterionResult>& results);

}  // namespace ssm

#endif
