#pragma once

namespace cdl::stats {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double z);

/// Upper tail of the limiting Kolmogorov distribution, P(K > t).
[[nodiscard]] double kolmogorov_sf(double t);

/// P(D_n < d) for the one-sample two-sided K-S statistic (Marsaglia, Tsang
/// and Wang 2003). Intended for small n; cost grows with n·d.
[[nodiscard]] double kolmogorov_cdf_exact(int n, double d);

/// Upper tail of chi-square with 2 degrees of freedom.
[[nodiscard]] double chi2_2_sf(double x);

/// Crossing probability of the Brown–Durbin–Evans CUSUM boundary of height a:
/// 2[1 - Φ(3a) + exp(-4a²) Φ(a)], clipped to [0, 1].
[[nodiscard]] double bde_crossing_probability(double a);

/// The a with bde_crossing_probability(a) == alpha (0.948 at 0.05).
[[nodiscard]] double bde_critical_value(double alpha);

}  // namespace cdl::stats
