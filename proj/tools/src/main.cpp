#include <algorithm>
#include <iostream>

#include "commands.hpp"
#include "vmrf/error.hpp"

int main(int argc, char** argv) {
    using namespace vmrf::cli;
    try {
        std::vector<std::string> args = expand_config(argc, argv);
        CLI::App app{"Gaussian Volterra processes, Girsanov reweighting and graph Markov fields", "vmrf"};
        app.set_version_flag("--version", VMRF_VERSION);
        const CommandSet commands(app);
        std::vector<std::string> rest(args.begin() + 1, args.end());
        std::reverse(rest.begin(), rest.end());
        try {
            app.parse(rest);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? exit_pass : exit_usage;
        }
        return commands.run();
    } catch (const vmrf::Error& e) {
        std::cerr << "vmrf: error [" << vmrf::error_code_name(e.code()) << "]: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "vmrf: error: " << e.what() << "\n";
    }
    return exit_usage;
}
