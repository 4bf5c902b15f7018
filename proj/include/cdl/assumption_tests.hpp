#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cdl/dataset.hpp"
#include "cdl/graph.hpp"
#include "cdl/levels.hpp"

namespace cdl {

class AssumptionTestError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Decision { RejectNull, FailToReject };
[[nodiscard]] std::string_view to_string(Decision d);

/// The knowledge level a test addresses: one tag on either scale.
using LevelTag = std::variant<StructuralTag, ParametricTag>;
/// "structural:plausible", "parametric:noise_model", ...
[[nodiscard]] std::string to_string(const LevelTag& tag);

struct TestReport {
    std::string test;
    double statistic = 0.0;
    std::optional<double> p_value;
    double alpha = 0.05;
    Decision decision = Decision::FailToReject;
    LevelTag bears_on = ParametricTag::NoiseModel;
    /// Threshold on the statistic, when the decision is driven by one.
    std::optional<double> critical_value;
    /// Procedure parameters (permutation count, window, boundary family, ...).
    nlohmann::json details = nlohmann::json::object();
    /// Advisory reports that do not affect the decision.
    std::vector<TestReport> sub_reports;
};

/// {test, statistic, p_value, alpha, decision, bears_on}, plus critical_value,
/// details and sub_reports when present.
[[nodiscard]] nlohmann::json to_json(const TestReport& r);
[[nodiscard]] std::string to_text(const TestReport& r);

using Cdf = std::function<double(double)>;
[[nodiscard]] Cdf normal_cdf(double mean, double sd);
[[nodiscard]] Cdf uniform_cdf(double low, double high);

/// One-sample Kolmogorov–Smirnov test. Exact p-value for n < 35, asymptotic
/// Kolmogorov distribution of √n·D otherwise.
[[nodiscard]] TestReport ks_test(std::span<const double> sample, const Cdf& reference,
                                 double alpha = 0.05);

/// JB = n/6 (S² + (K-3)²/4) with population moments; p from chi-square(2).
[[nodiscard]] TestReport jarque_bera(std::span<const double> sample, double alpha = 0.05);

/// Brown–Durbin–Evans CUSUM of recursive OLS residuals after sorting by x.
/// Rejects when max_r |W_r| / (√(n-m) + 2(r-m)/√(n-m)) exceeds a(alpha).
/// Carries an advisory K-S sub-report of the standardised recursive residuals.
[[nodiscard]] TestReport cusum_linearity_test(std::span<const double> x, std::span<const double> y,
                                              double alpha = 0.05);

/// Local polynomial least-squares smoothing. Interior points use the centred
/// window; the first and last window/2 points use the first or last full window.
[[nodiscard]] std::vector<double> savitzky_golay_smooth(std::span<const double> y, int window,
                                                        int degree);
/// Serial reference: a direct least-squares fit at every point.
[[nodiscard]] std::vector<double> savitzky_golay_smooth_serial(std::span<const double> y,
                                                               int window, int degree);

inline constexpr int kPermutations = 999;
inline constexpr std::uint64_t kPermutationSeed = 20240117;

/// max(|ρs(x, r)|, |ρs(x, |r|)|, |ρs(|x - median x|, |r|)|) with average ranks;
/// ρs of a constant series is 0. p = (1 + #{T_perm >= T}) / (1 + kPermutations)
/// over permutations of r.
[[nodiscard]] TestReport residual_independence_test(std::span<const double> x,
                                                    std::span<const double> residuals,
                                                    double alpha = 0.05,
                                                    std::uint64_t seed = kPermutationSeed);
[[nodiscard]] TestReport residual_independence_test_serial(std::span<const double> x,
                                                           std::span<const double> residuals,
                                                           double alpha = 0.05,
                                                           std::uint64_t seed = kPermutationSeed);

enum class AnmDirection { XtoY, YtoX, Inconclusive };
[[nodiscard]] std::string_view to_string(AnmDirection d);

struct AnmResult {
    AnmDirection direction = AnmDirection::Inconclusive;
    int window = 0;
    TestReport forward;   // residuals of y on x
    TestReport backward;  // residuals of x on y
};

/// Additive-noise direction check with a degree-3 Savitzky–Golay regression,
/// window max(5, odd(n/10)).
[[nodiscard]] AnmResult anm_direction(std::span<const double> x, std::span<const double> y,
                                      double alpha = 0.05);

/// Gaussian partial correlation of x and y given z with a Fisher z p-value.
[[nodiscard]] TestReport partial_correlation_ci_test(const Dataset& d, const Variable& x,
                                                     const Variable& y, const VariableSet& z,
                                                     double alpha = 0.05);

enum class Testability { NoTestsNeeded, Testable, Untestable };
[[nodiscard]] std::string_view to_string(Testability t);
[[nodiscard]] Testability testability_tier(StructuralTag tag) noexcept;
[[nodiscard]] Testability testability_tier(ParametricTag tag) noexcept;

/// Fraction of trials whose `rejects(trial_seed)` returns true. Trial seeds are
/// derived from (seed, trial index), so the result does not depend on threads.
[[nodiscard]] double rejection_rate(int trials, std::uint64_t seed,
                                    const std::function<bool(std::uint64_t)>& rejects);
[[nodiscard]] double rejection_rate_serial(int trials, std::uint64_t seed,
                                           const std::function<bool(std::uint64_t)>& rejects);
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

}  // namespace cdl
