#include "rmtlab/semicircle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace rmtlab::semicircle {

double density(double x) {
    if (std::fabs(x) >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
           std::asin(0.5 * x) / std::numbers::pi;
}

long long moment(int order) {
    if (order < 0 || order % 2 != 0) throw OddOrder("semicircle moment: order must be even");
    if (order > 40) throw OrderTooLarge("semicircle moment: order must be <= 40");
    // C_k via C_j = C_{j-1} * (4j-2)/(j+1), exact in integers
    long long c = 1;
    for (int j = 1; j <= order / 2; ++j) {
        c = c * (4LL * j - 2) / (j + 1);
    }
    return c;
}

double ks_distance(std::span<const double> eigenvalues) {
    if (eigenvalues.empty()) {
        throw std::invalid_argument("ks_distance: spectrum must be nonempty");
    }
    std::vector<double> x(eigenvalues.begin(), eigenvalues.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        dist = std::max(dist, std::fabs((static_cast<double>(i) + 1.0) / n - f));
        dist = std::max(dist, std::fabs(static_cast<double>(i) / n - f));
    }
    return dist;
}

double ks_distance(const Spectrum& spectrum) {
    return ks_distance(std::span<const double>(spectrum.eigenvalues));
}

}  // namespace rmtlab::semicircle
