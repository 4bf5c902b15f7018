#include "cdl/assumption_tests.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "cdl/distributions.hpp"

namespace cdl {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AssumptionTestError("alpha must lie in (0, 1)");
}

Decision by_p(double p, double alpha) { return p < alpha ? Decision::RejectNull : Decision::FailToReject; }

double ks_statistic(std::vector<double> sorted, const Cdf& reference) {
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = reference(sorted[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

}  // namespace

Cdf normal_cdf(double mean, double sd) {
    if (!(sd > 0.0)) throw AssumptionTestError("normal reference needs sd > 0");
    return [mean, sd](double v) { return stats::normal_cdf((v - mean) / sd); };
}

Cdf uniform_cdf(double low, double high) {
    if (!(low < high)) throw AssumptionTestError("uniform reference needs low < high");
    return [low, high](double v) { return std::clamp((v - low) / (high - low), 0.0, 1.0); };
}

TestReport ks_test(std::span<const double> sample, const Cdf& reference, double alpha) {
    check_alpha(alpha);
    if (sample.empty()) throw AssumptionTestError("ks_test: empty sample");
    const int n = static_cast<int>(sample.size());
    const double d = ks_statistic({sample.begin(), sample.end()}, reference);
    TestReport r;
    r.test = "kolmogorov_smirnov";
    r.statistic = d;
    r.alpha = alpha;
    r.bears_on = ParametricTag::NoiseModel;
    if (n < 35) {
        r.p_value = std::clamp(1.0 - stats::kolmogorov_cdf_exact(n, d), 0.0, 1.0);
        r.details["p_value_method"] = "exact";
    } else {
        r.p_value = stats::kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
        r.details["p_value_method"] = "asymptotic";
    }
    r.details["n"] = n;
    r.decision = by_p(*r.p_value, alpha);
    return r;
}

TestReport jarque_bera(std::span<const double> sample, double alpha) {
    check_alpha(alpha);
    const std::size_t n = sample.size();
    if (n < 3) throw AssumptionTestError("jarque_bera: needs at least 3 observations");
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : sample) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 1e-300) || m2 <= 1e-24 * mean * mean) {
        throw AssumptionTestError("jarque_bera: sample has zero variance");
    }
    const double s = m3 / std::pow(m2, 1.5);
    const double k = m4 / (m2 * m2);
    TestReport r;
    r.test = "jarque_bera";
    r.statistic = n / 6.0 * (s * s + (k - 3.0) * (k - 3.0) / 4.0);
    r.p_value = stats::chi2_2_sf(r.statistic);
    r.alpha = alpha;
    r.decision = by_p(*r.p_value, alpha);
    r.bears_on = ParametricTag::NoiseModel;
    r.details["skewness"] = s;
    r.details["kurtosis"] = k;
    r.details["n"] = n;
    return r;
}

TestReport cusum_linearity_test(std::span<const double> x, std::span<const double> y, double alpha) {
    check_alpha(alpha);
    if (x.size() != y.size()) throw AssumptionTestError("cusum_linearity_test: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 5) throw AssumptionTestError("cusum_linearity_test: needs at least 5 observations");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[idx[i]];
        ys[i] = y[idx[i]];
    }
    // m: shortest prefix with two distinct x values.
    std::size_t m = 1;
    while (m < n && xs[m] == xs[0]) ++m;
    if (m == n) throw AssumptionTestError("cusum_linearity_test: x is constant");
    ++m;
    if (n - m < 2) throw AssumptionTestError("cusum_linearity_test: too few observations after ties");

    Eigen::Matrix2d xtx = Eigen::Matrix2d::Zero();
    Eigen::Vector2d xty = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::Vector2d row(1.0, xs[i]);
        xtx += row * row.transpose();
        xty += row * ys[i];
    }
    Eigen::Matrix2d inv = xtx.inverse();
    Eigen::Vector2d beta = inv * xty;
    std::vector<double> w;
    w.reserve(n - m);
    for (std::size_t r = m; r < n; ++r) {
        const Eigen::Vector2d row(1.0, xs[r]);
        const Eigen::Vector2d v = inv * row;
        const double f = 1.0 + row.dot(v);
        const double e = ys[r] - row.dot(beta);
        w.push_back(e / std::sqrt(f));
        // Sherman–Morrison update of (X'X)^{-1} and the coefficients.
        inv -= v * v.transpose() / f;
        beta += inv * row * e;
    }

    const double k = static_cast<double>(n - m);
    double ss = 0.0;
    for (double v : w) ss += v * v;
    const double sigma = std::sqrt(ss / k);
    double ymax = 0.0;
    for (double v : ys) ymax = std::max(ymax, std::abs(v));

    TestReport r;
    r.test = "cusum_linearity";
    r.alpha = alpha;
    r.bears_on = ParametricTag::Parametric;
    r.critical_value = stats::bde_critical_value(alpha);
    r.details["boundary"] = "brown_durbin_evans";
    r.details["first_recursive_index"] = m;
    r.details["boundary_at_first"] = *r.critical_value * std::sqrt(k);
    r.details["n"] = n;

    if (sigma <= 1e-12 * (1.0 + ymax)) {
        r.statistic = 0.0;
        r.details["perfect_fit"] = true;
    } else {
        double cum = 0.0;
        double stat = 0.0;
        std::vector<double> standardised;
        for (std::size_t j = 0; j < w.size(); ++j) {
            cum += w[j] / sigma;
            standardised.push_back(w[j] / sigma);
            const double bound = std::sqrt(k) + 2.0 * (j + 1) / std::sqrt(k);
            stat = std::max(stat, std::abs(cum) / bound);
        }
        r.statistic = stat;
        r.sub_reports.push_back(ks_test(standardised, normal_cdf(0.0, 1.0), alpha));
    }
    r.p_value = stats::bde_crossing_probability(r.statistic);
    r.decision = r.statistic > *r.critical_value ? Decision::RejectNull : Decision::FailToReject;
    return r;
}

AnmResult anm_direction(std::span<const double> x, std::span<const double> y, double alpha) {
    check_alpha(alpha);
    if (x.size() != y.size()) throw AssumptionTestError("anm_direction: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 50) throw AssumptionTestError("anm_direction: needs at least 50 observations");
    int window = static_cast<int>(n / 10);
    if (window % 2 == 0) ++window;
    window = std::max(5, window);

    auto fit = [&](std::span<const double> pred, std::span<const double> target) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pred[a] < pred[b]; });
        std::vector<double> ps(n), ts(n);
        for (std::size_t i = 0; i < n; ++i) {
            ps[i] = pred[idx[i]];
            ts[i] = target[idx[i]];
        }
        const auto smooth = savitzky_golay_smooth(ts, window, 3);
        std::vector<double> resid(n);
        for (std::size_t i = 0; i < n; ++i) resid[i] = ts[i] - smooth[i];
        auto rep = residual_independence_test(ps, resid, alpha);
        rep.details["smoother"] = {{"window", window}, {"degree", 3}};
        return rep;
    };

    AnmResult out;
    out.window = window;
    out.forward = fit(x, y);
    out.backward = fit(y, x);
    const bool fwd = out.forward.decision == Decision::FailToReject;
    const bool bwd = out.backward.decision == Decision::FailToReject;
    if (fwd && !bwd) out.direction = AnmDirection::XtoY;
    else if (bwd && !fwd) out.direction = AnmDirection::YtoX;
    return out;
}

TestReport partial_correlation_ci_test(const Dataset& d, const Variable& x, const Variable& y,
                                       const VariableSet& z, double alpha) {
    check_alpha(alpha);
    if (x == y) throw AssumptionTestError("partial correlation needs two variables");
    if (z.count(x) || z.count(y)) throw AssumptionTestError("conditioning set may not contain x or y");
    std::vector<Variable> names{x, y};
    names.insert(names.end(), z.begin(), z.end());
    for (const auto& v : names) {
        if (!d.has(v)) throw AssumptionTestError("dataset has no column '" + v + "'");
    }
    const std::size_t n = d.rows();
    if (n <= z.size() + 3) throw AssumptionTestError("partial correlation needs n > |z| + 3");

    const auto k = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const auto col = d.column(names[c]);
        for (std::size_t r = 0; r < n; ++r) data(static_cast<Eigen::Index>(r), c) = col[r];
    }
    const Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;
    const Eigen::MatrixXd cov = data.transpose() * data;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    for (Eigen::Index c = 0; c < k; ++c) {
        if (!(sd(c) > 0.0)) throw AssumptionTestError("column '" + names[c] + "' is constant; correlation matrix is singular");
    }
    const Eigen::MatrixXd corr = sd.asDiagonal().inverse() * cov * sd.asDiagonal().inverse();

    Eigen::Matrix2d block = corr.topLeftCorner(2, 2);
    if (k > 2) {
        const auto zz = corr.bottomRightCorner(k - 2, k - 2);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(zz);
        lu.setThreshold(1e-10);
        if (lu.rank() < k - 2) throw AssumptionTestError("conditioning correlation submatrix is singular");
        const Eigen::MatrixXd xz = corr.topRightCorner(2, k - 2);
        block -= xz * lu.solve(xz.transpose());
        if (!(block(0, 0) > 1e-12 && block(1, 1) > 1e-12)) {
            throw AssumptionTestError("correlation submatrix is singular");
        }
    }
    const double rho = std::clamp(block(0, 1) / std::sqrt(block(0, 0) * block(1, 1)), -1.0, 1.0);
    const double dof = static_cast<double>(n) - static_cast<double>(z.size()) - 3.0;
    double p = 0.0;
    double fisher = std::numeric_limits<double>::infinity();
    if (std::abs(rho) < 1.0) {
        fisher = std::atanh(rho) * std::sqrt(dof);
        p = std::erfc(std::abs(fisher) / std::numbers::sqrt2);
    }

    TestReport r;
    r.test = "partial_correlation";
    r.statistic = rho;
    r.p_value = p;
    r.alpha = alpha;
    r.decision = by_p(p, alpha);
    r.bears_on = StructuralTag::Plausible;
    r.details["fisher_z"] = std::isfinite(fisher) ? nlohmann::json(fisher) : nlohmann::json(nullptr);
    r.details["conditioning"] = std::vector<std::string>(z.begin(), z.end());
    r.details["n"] = n;
    return r;
}

Testability testability_tier(StructuralTag tag) noexcept {
    switch (tag) {
        case StructuralTag::Unknown: return Testability::NoTestsNeeded;
        case StructuralTag::Plausible: return Testability::Testable;
        case StructuralTag::Causal: return Testability::Untestable;
    }
    return Testability::Untestable;
}

Testability testability_tier(ParametricTag tag) noexcept {
    switch (tag) {
        case ParametricTag::NonParametric: return Testability::NoTestsNeeded;
        case ParametricTag::NoiseModel:
        case ParametricTag::Parametric: return Testability::Testable;
        case ParametricTag::FullyKnown: return Testability::Untestable;
    }
    return Testability::Untestable;
}

}  // namespace cdl
