#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "vmrf/selftest.hpp"

// Runs the acceptance suite and prints one verdict line per criterion. A criterion
// passes when its checks pass and it finished within its runtime budget.
//
//   vmrf_acceptance [--quick] [--workers N] [--seed S] [--only ID]...
int main(int argc, char** argv) {
    vmrf::SelftestOptions options;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const bool has_value = i + 1 < argc;
        if (arg == "--quick") {
            options.quick = true;
        } else if (arg == "--workers" && has_value) {
            options.workers = std::atoi(argv[++i]);
        } else if (arg == "--seed" && has_value) {
            options.seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--only" && has_value) {
            options.only.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--quick] [--workers N] [--seed S] [--only ID]...\n", argv[0]);
            return 1;
        }
    }

    std::vector<int> ids = options.only;
    if (ids.empty())
        for (int id = 1; id <= vmrf::kCriterionCount; ++id) ids.push_back(id);

    int failures = 0;
    for (int id : ids) {
        const vmrf::CriterionResult r = vmrf::run_criterion(id, options);
        const bool pass = r.pass && r.within_budget();
        if (!pass) ++failures;
        std::printf("criterion %2d [%s] %-32s %7.2fs (budget %.0fs)%s\n", id, pass ? "PASS" : "FAIL", r.title.c_str(),
                    r.seconds, r.budget_seconds, r.within_budget() ? "" : " over budget");
        for (const auto& c : r.checks) {
            if (c.pass) continue;
            std::printf("    failed check: %s", c.name.c_str());
            for (const auto& v : c.values) std::printf(" %s=%.6g", v.name.c_str(), v.value);
            std::printf("\n");
        }
        if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failures, ids.size());
    return failures == 0 ? 0 : 2;
}
