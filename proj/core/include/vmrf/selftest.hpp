#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vmrf {

struct SelftestOptions {
    std::uint64_t seed = 20240611;
    int workers = 1;
    // Reduced path counts and repetitions; the statistical contracts are unchanged.
    bool quick = false;
    // Criterion ids to run (1..10); empty runs all of them.
    std::vector<int> only;
};

struct Measurement {
    std::string name;
    double value = 0.0;
};

// One assertion inside a criterion, with the numbers it was decided on.
struct CheckResult {
    std::string name;
    bool pass = true;
    std::vector<Measurement> values;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = true;  // statistical / numerical verdict, independent of timing
    std::vector<CheckResult> checks;
    std::vector<Measurement> info;  // reported figures that carry no verdict
    std::string error;              // set when the criterion aborted with an exception
    double seconds = 0.0;
    double budget_seconds = 0.0;
    bool within_budget() const { return seconds < budget_seconds; }
};

struct SelftestReport {
    SelftestOptions options;
    std::vector<CriterionResult> criteria;
    bool pass() const;
};

// Number of criteria in the suite.
inline constexpr int kCriterionCount = 10;

std::string criterion_title(int id);
double criterion_budget_seconds(int id);

CriterionResult run_criterion(int id, const SelftestOptions& options);
SelftestReport run_selftest(const SelftestOptions& options);

// Deterministic JSON text of the verdicts and measured values (no wall-clock data).
std::string results_json(const SelftestReport& report);
// JSON text with the per-criterion runtimes and budgets.
std::string timing_json(const SelftestReport& report);

}  // namespace vmrf
