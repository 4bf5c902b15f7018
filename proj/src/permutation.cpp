#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cdl/assumption_tests.hpp"

namespace cdl {

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
        i = j + 1;
    }
    return rank;
}

// Ranks centred and scaled to unit norm; all zeros for a constant series.
std::vector<double> normalised_ranks(const std::vector<double>& v) {
    auto r = average_ranks(v);
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
    double ss = 0.0;
    for (auto& e : r) {
        e -= mean;
        ss += e * e;
    }
    const double norm = std::sqrt(ss);
    for (auto& e : r) e = norm > 0.0 ? e / norm : 0.0;
    return r;
}

struct RankedInputs {
    std::vector<double> x;       // ranks of x
    std::vector<double> x_dev;   // ranks of |x - median x|
    std::vector<double> r;       // ranks of residuals
    std::vector<double> r_abs;   // ranks of |residuals|
};

RankedInputs prepare(std::span<const double> x, std::span<const double> residuals) {
    if (x.size() != residuals.size()) {
        throw AssumptionTestError("residual_independence_test: x and residuals differ in length");
    }
    if (x.size() < 20) throw AssumptionTestError("residual_independence_test: needs at least 20 observations");
    std::vector<double> xv(x.begin(), x.end());
    std::vector<double> sorted = xv;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::vector<double> dev(n), rv(residuals.begin(), residuals.end()), ra(n);
    for (std::size_t i = 0; i < n; ++i) {
        dev[i] = std::abs(xv[i] - median);
        ra[i] = std::abs(rv[i]);
    }
    return {normalised_ranks(xv), normalised_ranks(dev), normalised_ranks(rv), normalised_ranks(ra)};
}

double statistic(const RankedInputs& in, const std::vector<std::size_t>& perm) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t p = perm[i];
        a += in.x[i] * in.r[p];
        b += in.x[i] * in.r_abs[p];
        c += in.x_dev[i] * in.r_abs[p];
    }
    return std::max({std::abs(a), std::abs(b), std::abs(c)});
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed, int k) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(trial_seed(seed, static_cast<std::uint64_t>(k)));
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

TestReport make_report(double observed, int exceed, double alpha, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AssumptionTestError("alpha must lie in (0, 1)");
    TestReport r;
    r.test = "residual_independence";
    r.statistic = observed;
    r.p_value = (1.0 + exceed) / (1.0 + kPermutations);
    r.alpha = alpha;
    r.decision = *r.p_value < alpha ? Decision::RejectNull : Decision::FailToReject;
    r.bears_on = ParametricTag::NoiseModel;
    r.details["permutations"] = kPermutations;
    r.details["seed"] = seed;
    r.details["statistic"] = "max |spearman| of (x, r), (x, |r|), (|x - median|, |r|)";
    return r;
}

// Permuted statistics equal to the observed one up to rounding count as exceeding.
constexpr double kTieSlack = 1e-12;

}  // namespace

TestReport residual_independence_test(std::span<const double> x, std::span<const double> residuals,
                                      double alpha, std::uint64_t seed) {
    const auto in = prepare(x, residuals);
    std::vector<std::size_t> identity(in.x.size());
    std::iota(identity.begin(), identity.end(), 0);
    const double observed = statistic(in, identity);
    int exceed = 0;
#pragma omp parallel for reduction(+ : exceed) schedule(static)
    for (int k = 0; k < kPermutations; ++k) {
        if (statistic(in, permutation(in.x.size(), seed, k)) >= observed - kTieSlack) ++exceed;
    }
    return make_report(observed, exceed, alpha, seed);
}

TestReport residual_independence_test_serial(std::span<const double> x,
                                             std::span<const double> residuals, double alpha,
                                             std::uint64_t seed) {
    const auto in = prepare(x, residuals);
    std::vector<std::size_t> identity(in.x.size());
    std::iota(identity.begin(), identity.end(), 0);
    const double observed = statistic(in, identity);
    int exceed = 0;
    for (int k = 0; k < kPermutations; ++k) {
        if (statistic(in, permutation(in.x.size(), seed, k)) >= observed - kTieSlack) ++exceed;
    }
    return make_report(observed, exceed, alpha, seed);
}

}  // namespace cdl
