#include "report.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>

#include "vmrf/error.hpp"

namespace vmrf::cli {

CsvWriter::CsvWriter(std::ostream& out) : out_(out) { out_ << std::setprecision(17); }

void CsvWriter::header(std::initializer_list<std::string> names) {
    bool first = true;
    for (const auto& n : names) {
        out_ << (first ? "" : ",") << n;
        first = false;
    }
    out_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
    out_ << "\r\n";
}

void CsvWriter::row(long long label, const std::vector<double>& values) {
    out_ << label;
    for (double v : values) out_ << ',' << v;
    out_ << "\r\n";
}

namespace {

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    std::set<std::string> given;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
            continue;
        }
        if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
            continue;
        }
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
        rest.push_back(a);
    }
    std::vector<std::string> out{args[0]};
    if (config_path.empty() || rest.empty()) {
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    std::ifstream in(config_path);
    if (!in) fail(ErrorCode::io_error, "cannot open config file " + config_path);
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
        fail(ErrorCode::io_error, "config file " + config_path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) fail(ErrorCode::invalid_argument, "config file must hold a JSON object");
    // The subcommand stays first so the injected flags bind to it.
    out.push_back(rest.front());
    for (const auto& [key, value] : cfg.items()) {
        if (given.count(key)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back("--" + key);
        } else if (value.is_array()) {
            for (const auto& item : value) {
                out.push_back("--" + key);
                out.push_back(scalar_text(item));
            }
        } else {
            out.push_back("--" + key);
            out.push_back(scalar_text(value));
        }
    }
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
    out << text;
    if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

}  // namespace vmrf::cli
