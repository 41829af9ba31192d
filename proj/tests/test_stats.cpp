#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "armwind/manifest.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"
#include "armwind/stats.hpp"

using namespace armwind;

TEST_SUITE("stats") {

TEST_CASE("splitmix64 reference outputs") {
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(s) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64(s) == 0x06C45D188009454FULL);
}

TEST_CASE("moments") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(mean(x) == doctest::Approx(2.5));
  CHECK(variance(x) == doctest::Approx(5.0 / 3.0));
  CHECK(raw_moment(x, 2) == doctest::Approx(7.5));
  CHECK(mean_stderr(x) == doctest::Approx(std::sqrt(5.0 / 12.0)));

  Xoshiro256 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> y(20000);
  for (double& v : y) v = 2.0 * normal(rng);
  // Normal theory: sd of the sample variance is sigma^2 sqrt(2 / (n - 1)).
  CHECK(jackknife_variance_stderr(y) == doctest::Approx(4.0 * std::sqrt(2.0 / 19999)).epsilon(0.1));
}

TEST_CASE("normality test") {
  Xoshiro256 rng(11);
  std::normal_distribution<double> normal;
  std::vector<double> x(100000);
  for (double& v : x) v = 3 + 0.5 * normal(rng);
  const KsResult ks = ks_standard_normal(x);
  CHECK(ks.statistic < 0.006);
  CHECK(ks.p_value > 0.01);
  const std::vector<double> flat(1000, 2.0);
  CHECK(ks_standard_normal(flat).statistic >= 0.5);
  std::vector<double> expo(5000);
  std::exponential_distribution<double> e;
  for (double& v : expo) v = e(rng);
  CHECK(ks_standard_normal(expo).p_value < 1e-6);
  CHECK(kolmogorov_tail(1.358) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("linear fits") {
  const std::vector<double> x{std::log(32.0), std::log(64.0), std::log(128.0), std::log(256.0)};
  std::vector<double> y, w, flat;
  for (double v : x) {
    y.push_back(1.5 * v + 0.7);
    flat.push_back(0.3);
    w.push_back(1.0 + v);
  }
  CHECK(std::abs(weighted_linear_fit(x, y, w).slope - 1.5) < 1e-9);
  CHECK(std::abs(weighted_linear_fit(x, y, w).intercept - 0.7) < 1e-9);
  CHECK(std::abs(weighted_linear_fit(x, flat, w).slope) < 1e-12);
  CHECK(std::abs(linear_fit(x, y).slope - 1.5) < 1e-9);
  CHECK(linear_fit(x, y).slope_stderr < 1e-9);
}

TEST_CASE("intervals and distances") {
  const Interval zero = wilson_interval(0, 10);
  CHECK(zero.lower == doctest::Approx(0.0));
  CHECK(zero.upper == doctest::Approx(0.2775).epsilon(0.01));
  const Interval half = wilson_interval(50, 100);
  CHECK(half.lower < 0.5);
  CHECK(half.upper > 0.5);
  CHECK((half.upper - 0.5) == doctest::Approx(0.5 - half.lower));

  const std::vector<std::int64_t> a{0, 0, 1, 1}, b{2, 2, 3, 3}, c{0, 1, 1, 1};
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == 1.0);
  CHECK(tv_distance(a, c) == doctest::Approx(0.25));
  const TvEstimate t1 = bootstrap_tv(a, c, 200, 9), t2 = bootstrap_tv(a, c, 200, 9);
  CHECK(t1.ci.lower == t2.ci.lower);
  CHECK(t1.ci.upper == t2.ci.upper);
  CHECK(t1.ci.lower >= 0);
  CHECK(t1.ci.upper <= 1);

  CHECK(normal_cdf(0) == doctest::Approx(0.5));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985));
}

TEST_CASE("manifest hash") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  // Git blob id of "hello\n".
  CHECK(sha1_hex(std::string("blob 6\0hello\n", 13)) == "ce013625030ba8dba906f756967f9e9ca394464a");

  ExperimentManifest m;
  m.command = "arm-prob";
  m.params = {{"sigma", "BY"}, {"R_lat", "64"}};
  m.seed = 42;
  m.outputs = {"out.csv"};
  const std::string body = m.canonical();
  std::string blob = "blob " + std::to_string(body.size());
  blob.push_back('\0');
  CHECK(m.hash() == sha1_hex(blob + body));
  CHECK(body.find("R_lat=64\n") != std::string::npos);

  ExperimentManifest threads = m;
  threads.threads = 8;
  CHECK(threads.hash() == m.hash());
  ExperimentManifest other = m;
  other.seed = 43;
  CHECK(other.hash() != m.hash());
  CHECK(m.to_json().find(m.hash()) != std::string::npos);
}

TEST_CASE("parallel map") {
  auto f = [](std::size_t i) { return derive_seed(5, i); };
  const auto one = parallel_map(1000, 1, f);
  const auto many = parallel_map(1000, 8, f);
  CHECK(one == many);
  try {
    parallel_map(100, 4, [](std::size_t i) -> int {
      if (i == 30 || i == 70) throw std::runtime_error(std::to_string(i));
      return int(i);
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "30");
  }
}

}  // TEST_SUITE
