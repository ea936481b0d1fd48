#pragma once

#include <functional>
#include <string>
#include <vector>

#include "report.hpp"

namespace vmrf::cli {

struct Settings;

// Result of one subcommand: the "results" block of its report, the verdict of any
// statistical contract it checked, and extra timing entries.
struct Outcome {
    Json results = Json::object();
    bool pass = true;
    Json timing = Json::object();
};

// Registers every subcommand on `app`; run() executes the one that was parsed,
// writes its report and returns the process exit code.
class CommandSet {
public:
    explicit CommandSet(CLI::App& app);
    int run() const;

private:
    struct Command {
        CLI::App* app = nullptr;
        std::function<Outcome()> body;
        const Settings* settings = nullptr;
        bool csv_defaults_to_stdout = false;
    };
    std::vector<Command> commands_;
};

}  // namespace vmrf::cli
