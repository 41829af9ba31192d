#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace armwind {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double raw_moment(std::span<const double> x, int order);
/// Standard error of the mean.
double mean_stderr(std::span<const double> x);

/// Jackknife standard error of the unbiased sample variance.
double jackknife_variance_stderr(std::span<const double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// KS distance between (x - mean)/sd and the standard normal. Needs >= 2
/// samples; constant samples give distance 0.5.
KsResult ks_standard_normal(std::span<const double> x);
/// Asymptotic Kolmogorov tail P[sqrt(n) D > t].
double kolmogorov_tail(double t);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
};

/// Weighted least squares of y on x; stderr from the inverse normal matrix.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w);
/// Ordinary least squares with residual-based stderr.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t hits, std::int64_t n, double z = 1.959963984540054);

struct TvEstimate {
  double tv = 0.0;
  Interval ci;
};

/// Total variation between the empirical laws of two integer-valued samples,
/// with a percentile bootstrap interval.
double tv_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
TvEstimate bootstrap_tv(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                        int n_boot, std::uint64_t seed);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace armwind
