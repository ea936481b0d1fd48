#include "vmrf/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "vmrf/error.hpp"

namespace vmrf {

bool McEstimate::within(double target, double k) const {
    const double gap = std::abs(estimate - target);
    if (stderr_ == 0.0) return gap <= 1e-12 * std::max(1.0, std::abs(target));
    return gap < k * stderr_;
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t block = 32;
    if (values.size() <= block) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
    require(!values.empty(), "mean: empty sample");
    return pairwise_sum(values) / static_cast<double>(values.size());
}

McEstimate mean_estimate(std::span<const double> values) {
    require(values.size() >= 2, "mean_estimate: need at least two samples");
    const double mu = mean(values);
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mu) * (values[i] - mu);
    const double n = static_cast<double>(values.size());
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {mu, std::sqrt(var / n)};
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "sample_covariance: size mismatch or too few samples");
    const double mx = mean(x), my = mean(y);
    std::vector<double> prod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
    return pairwise_sum(prod) / static_cast<double>(x.size() - 1);
}

double covariance_stderr(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "covariance_stderr: size mismatch or too few samples");
    const double mx = mean(x), my = mean(y);
    std::vector<double> prod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
    return mean_estimate(prod).stderr_;
}

double ks_distance_uniform(std::vector<double> sample) {
    require(!sample.empty(), "ks_distance_uniform: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double u = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, (i + 1) / n - u, u - i / n});
    }
    return d;
}

}  // namespace vmrf
