#include "vmrf/drift.hpp"

#include <charconv>
#include <cmath>
#include <algorithm>
#include <sstream>
#include <vector>

#include "vmrf/error.hpp"

namespace vmrf {

DriftFunctional DriftFunctional::bounded_tanh(double theta, double scale) {
    require(scale > 0.0, "bounded tanh drift needs a positive scale");
    DriftFunctional d{DriftFamily::bounded_tanh, theta};
    d.scale = scale;
    return d;
}

double DriftFunctional::evaluate(double x, double neighbor_mean) const {
    switch (family) {
        case DriftFamily::constant: return theta0;
        case DriftFamily::linear: return theta0 + theta1 * x;
        case DriftFamily::bounded_tanh: return theta0 * std::tanh(x / scale);
        case DriftFamily::neighbor_linear: return theta0 + theta1 * x + theta2 * neighbor_mean;
    }
    return 0.0;
}

double DriftFunctional::growth_bound() const {
    switch (family) {
        case DriftFamily::constant: return std::abs(theta0);
        case DriftFamily::linear: return std::max(std::abs(theta0), std::abs(theta1));
        case DriftFamily::bounded_tanh: return std::abs(theta0);
        case DriftFamily::neighbor_linear: return std::max(std::abs(theta0), std::abs(theta1) + std::abs(theta2));
    }
    return 0.0;
}

bool DriftFunctional::is_zero() const {
    switch (family) {
        case DriftFamily::constant:
        case DriftFamily::bounded_tanh: return theta0 == 0.0;
        case DriftFamily::linear: return theta0 == 0.0 && theta1 == 0.0;
        case DriftFamily::neighbor_linear: return theta0 == 0.0 && theta1 == 0.0 && theta2 == 0.0;
    }
    return false;
}

std::string DriftFunctional::to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (family) {
        case DriftFamily::constant: os << "const:" << theta0; break;
        case DriftFamily::linear: os << "linear:" << theta0 << ':' << theta1; break;
        case DriftFamily::bounded_tanh: os << "tanh:" << theta0 << ':' << scale; break;
        case DriftFamily::neighbor_linear: os << "neighbor:" << theta0 << ':' << theta1 << ':' << theta2; break;
    }
    return os.str();
}

namespace {

double parse_number(std::string_view text, std::string_view context) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        fail(ErrorCode::invalid_argument, "bad number '" + std::string(text) + "' in drift spec '" + std::string(context) + "'");
    return value;
}

}  // namespace

DriftFunctional parse_drift(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    const std::string_view name = parts.front();
    auto arg = [&](std::size_t i) { return parse_number(parts[i], text); };
    auto expect = [&](std::size_t n) {
        if (parts.size() != n + 1)
            fail(ErrorCode::invalid_argument, "drift spec '" + std::string(text) + "' expects " + std::to_string(n) + " parameter(s)");
    };
    if (name == "zero") {
        expect(0);
        return DriftFunctional::zero();
    }
    if (name == "const") {
        expect(1);
        return DriftFunctional::constant(arg(1));
    }
    if (name == "linear") {
        expect(2);
        return DriftFunctional::linear(arg(1), arg(2));
    }
    if (name == "tanh") {
        expect(2);
        return DriftFunctional::bounded_tanh(arg(1), arg(2));
    }
    if (name == "neighbor") {
        expect(3);
        return DriftFunctional::neighbor_linear(arg(1), arg(2), arg(3));
    }
    fail(ErrorCode::invalid_argument, "unknown drift family in '" + std::string(text) + "'");
}

}  // namespace vmrf
