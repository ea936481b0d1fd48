#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace vmrf::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    exit_pass = 0,
    exit_usage = 1,
    exit_statistical = 2,
};

// RFC 4180 output: comma separated, CRLF line ends, round-trip precision.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out);
    void header(std::initializer_list<std::string> names);
    void row(const std::vector<double>& values);
    // First field is an integer label (index or path number).
    void row(long long label, const std::vector<double>& values);

private:
    std::ostream& out_;
};

// Rewrites argv so that keys of a JSON file given by --config become flags placed
// before the user's own arguments; keys the user passed explicitly are skipped.
std::vector<std::string> expand_config(int argc, char** argv);

// Writes text to `path`, or to stdout when the path is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace vmrf::cli
