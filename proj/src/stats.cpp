#include "armwind/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/normal.hpp>

#include "armwind/error.hpp"
#include "armwind/rng.hpp"

namespace armwind {

double mean(std::span<const double> x) {
  require(!x.empty(), ErrorKind::InvalidInput, "mean of empty sample");
  double s = 0;
  for (double v : x) s += v;
  return s / double(x.size());
}

double variance(std::span<const double> x) {
  require(x.size() >= 2, ErrorKind::InvalidInput, "variance needs two samples");
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / double(x.size() - 1);
}

double raw_moment(std::span<const double> x, int order) {
  require(!x.empty(), ErrorKind::InvalidInput, "moment of empty sample");
  double s = 0;
  for (double v : x) s += std::pow(v, order);
  return s / double(x.size());
}

double mean_stderr(std::span<const double> x) { return std::sqrt(variance(x) / double(x.size())); }

double jackknife_variance_stderr(std::span<const double> x) {
  const std::size_t n = x.size();
  require(n >= 3, ErrorKind::InvalidInput, "jackknife needs three samples");
  const double m = mean(x);
  double s1 = 0, s2 = 0;
  for (double v : x) {
    s1 += v - m;
    s2 += (v - m) * (v - m);
  }
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = x[i] - m;
    const double mi = (s1 - c) / double(n - 1);
    loo[i] = (s2 - c * c - double(n - 1) * mi * mi) / double(n - 2);
  }
  const double lm = mean(loo);
  double acc = 0;
  for (double v : loo) acc += (v - lm) * (v - lm);
  return std::sqrt(double(n - 1) / double(n) * acc);
}

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

double normal_quantile(double p) {
  require(p > 0 && p < 1, ErrorKind::InvalidParameter, "quantile needs 0 < p < 1");
  return boost::math::quantile(boost::math::normal(), p);
}

double kolmogorov_tail(double t) {
  if (t <= 0) return 1.0;
  if (t < 0.2) return 1.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

KsResult ks_standard_normal(std::span<const double> x) {
  const std::size_t n = x.size();
  require(n >= 2, ErrorKind::InvalidInput, "KS test needs samples");
  const double m = mean(x);
  const double sd = std::sqrt(variance(x));
  std::vector<double> z(x.begin(), x.end());
  std::sort(z.begin(), z.end());
  KsResult out;
  if (!(sd > 0)) {
    out.statistic = 0.5;
  } else {
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = normal_cdf((z[i] - m) / sd);
      d = std::max({d, double(i + 1) / double(n) - f, f - double(i) / double(n)});
    }
    out.statistic = d;
  }
  const double sn = std::sqrt(double(n));
  out.p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * out.statistic);
  return out;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w) {
  require(x.size() == y.size() && x.size() == w.size(), ErrorKind::InvalidInput,
          "fit inputs differ in length");
  require(x.size() >= 2, ErrorKind::InvalidInput, "fit needs two points");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(w[i] > 0 && std::isfinite(w[i]), ErrorKind::InvalidInput, "fit weights must be positive");
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xm = sx / sw, ym = sy / sw;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
  }
  require(sxx > 1e-300, ErrorKind::InvalidInput, "fit abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  f.slope_stderr = std::sqrt(1.0 / sxx);
  f.intercept_stderr = std::sqrt(1.0 / sw + xm * xm / sxx);
  return f;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> w(x.size(), 1.0);
  LinearFit f = weighted_linear_fit(x, y, w);
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    const double s = std::sqrt(rss / double(x.size() - 2));
    f.slope_stderr *= s;
    f.intercept_stderr *= s;
  }
  return f;
}

Interval wilson_interval(std::int64_t hits, std::int64_t n, double z) {
  require(n > 0, ErrorKind::InvalidParameter, "Wilson interval needs trials");
  require(hits >= 0 && hits <= n, ErrorKind::InvalidInput, "hits out of range");
  const double p = double(hits) / double(n);
  const double z2 = z * z;
  const double denom = 1 + z2 / double(n);
  const double center = (p + z2 / (2.0 * double(n))) / denom;
  const double half = z * std::sqrt(p * (1 - p) / double(n) + z2 / (4.0 * double(n) * double(n))) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double tv_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  require(!a.empty() && !b.empty(), ErrorKind::InvalidInput, "TV needs samples on both sides");
  std::map<std::int64_t, std::pair<double, double>> h;
  for (auto v : a) h[v].first += 1.0 / double(a.size());
  for (auto v : b) h[v].second += 1.0 / double(b.size());
  double s = 0;
  for (const auto& [k, pq] : h) s += std::abs(pq.first - pq.second);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

TvEstimate bootstrap_tv(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                        int n_boot, std::uint64_t seed) {
  TvEstimate out;
  out.tv = tv_distance(a, b);
  if (n_boot <= 0) {
    out.ci = {out.tv, out.tv};
    return out;
  }
  Xoshiro256 rng(seed);
  std::vector<double> reps;
  std::vector<std::int64_t> ra(a.size()), rb(b.size());
  for (int r = 0; r < n_boot; ++r) {
    for (auto& v : ra) v = a[rng() % a.size()];
    for (auto& v : rb) v = b[rng() % b.size()];
    reps.push_back(tv_distance(ra, rb));
  }
  std::sort(reps.begin(), reps.end());
  auto q = [&](double p) {
    const double pos = p * double(reps.size() - 1);
    const std::size_t lo = std::size_t(pos);
    const std::size_t hi = std::min(lo + 1, reps.size() - 1);
    return reps[lo] + (pos - double(lo)) * (reps[hi] - reps[lo]);
  };
  out.ci = {q(0.025), q(0.975)};
  return out;
}

}  // namespace armwind
