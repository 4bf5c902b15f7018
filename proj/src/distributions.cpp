#include "cdl/distributions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdl::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.18) {
        // P(K <= t) = sqrt(2π)/t Σ exp(-(2k-1)²π²/(8t²))
        const double w = std::numbers::pi * std::numbers::pi / (8.0 * t * t);
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) s += std::exp(-(2 * k - 1) * (2 * k - 1) * w);
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / t * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double kolmogorov_cdf_exact(int n, double d) {
    if (n < 1) throw std::invalid_argument("kolmogorov_cdf_exact: n must be positive");
    if (d <= 0.5 / n) return 0.0;
    if (d >= 1.0) return 1.0;
    const int k = static_cast<int>(n * d) + 1;
    const int m = 2 * k - 1;
    const double h = k - n * d;
    Eigen::MatrixXd H(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) H(i, j) = (i - j + 1 >= 0) ? 1.0 : 0.0;
    }
    for (int i = 0; i < m; ++i) {
        H(i, 0) -= std::pow(h, i + 1);
        H(m - 1, i) -= std::pow(h, m - i);
    }
    if (2 * h - 1 > 0) H(m - 1, 0) += std::pow(2 * h - 1, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i - j + 1 > 0) {
                for (int g = 1; g <= i - j + 1; ++g) H(i, j) /= g;
            }
        }
    }
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd base = H;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) Q = Q * base;
        if (e > 1) base = base * base;
    }
    double s = Q(k - 1, k - 1);
    for (int i = 1; i <= n; ++i) s = s * i / n;
    return std::clamp(s, 0.0, 1.0);
}

double chi2_2_sf(double x) { return x <= 0.0 ? 1.0 : std::exp(-x / 2.0); }

double bde_crossing_probability(double a) {
    const double p = 2.0 * (1.0 - normal_cdf(3.0 * a) + std::exp(-4.0 * a * a) * normal_cdf(a));
    return std::clamp(p, 0.0, 1.0);
}

double bde_critical_value(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    // The crossing probability decreases in a; bisect.
    double lo = 0.0;
    double hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (bde_crossing_probability(mid) > alpha) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace cdl::stats
