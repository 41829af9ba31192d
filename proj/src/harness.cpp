#include "armwind/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "armwind/arms.hpp"
#include "armwind/error.hpp"
#include "armwind/lattice.hpp"
#include "armwind/loops.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"

namespace armwind {

namespace {

struct TinyAnnulus {
  int R_lat;
  double r;
  double R;
};

// Loop predicates need the outer radius at the domain boundary.
constexpr TinyAnnulus kLoopAnnuli[] = {{2, 1, 2}, {3, 1, 3}};
constexpr TinyAnnulus kCrossingAnnuli[] = {{2, 1, 2}, {3, 1, 3}, {4, 1, 1.6}};
constexpr std::uint64_t kChunk = 4096;

Configuration with_annulus_bits(const DomainPtr& d, const Annulus& a, std::uint64_t m,
                                std::vector<std::uint64_t> bits) {
  const auto sites = a.sites();
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const std::uint64_t b = std::uint64_t{1} << (sites[k] & 63);
    if ((m >> k) & 1U) {
      bits[sites[k] >> 6] |= b;
    } else {
      bits[sites[k] >> 6] &= ~b;
    }
  }
  return Configuration(d, std::move(bits), m);
}

int loop_mismatches(const Configuration& c, const Annulus& a) {
  static const ColorSequence one = ColorSequence::parse("B"), two = ColorSequence::parse("BY"),
                             four = ColorSequence::parse("BYBY");
  const LoopEnsemble e = extract_loop_ensemble(c);
  return int(loop_arm_event(e, a, 1) != detect_arms(c, a, one)) +
         int(loop_arm_event(e, a, 2) != detect_arms(c, a, two)) +
         int(loop_arm_event(e, a, 4) != detect_arms(c, a, four));
}

int crossing_mismatches(const Configuration& c, const Annulus& a) {
  const int alt = max_disjoint_crossings_oracle(c, a, OracleMode::Alternating);
  const int blue = max_disjoint_crossings_oracle(c, a, OracleMode::Blue);
  return int(count_interface_crossings(c, a) != alt) +
         int(max_monochromatic_crossings(c, a, Color::Blue) != blue);
}

template <class Check>
OracleRow exhaustive(const char* name, const TinyAnnulus& t, std::uint64_t seed, int threads,
                     Check check) {
  const auto d = build_disc_domain(t.R_lat);
  const Annulus a = annulus_sites(d, t.r, t.R);
  const auto rest = sample_configuration(d, seed);
  const std::vector<std::uint64_t> bits(rest.bits().begin(), rest.bits().end());
  const std::uint64_t total = std::uint64_t{1} << a.sites().size();
  const std::size_t chunks = std::size_t((total + kChunk - 1) / kChunk);
  const auto counts = parallel_map(chunks, threads, [&](std::size_t c) {
    std::int64_t bad = 0;
    for (std::uint64_t m = c * kChunk; m < std::min(total, (c + 1) * kChunk); ++m) {
      bad += check(with_annulus_bits(d, a, m, bits), a);
    }
    return bad;
  });
  OracleRow row{name, t.R_lat, t.r, t.R, a.sites().size(), std::int64_t(total), 0};
  row.mismatches = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  return row;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

std::vector<OracleRow> oracle_verify(int max_sites, std::int64_t n_random, int random_R_lat,
                                     std::uint64_t seed, int threads) {
  require(max_sites >= 1 && std::size_t(max_sites) <= kAlternatingOracleSites,
          ErrorKind::InvalidParameter, "max sites must be in [1, 24]");
  require(n_random >= 0 && random_R_lat >= 8, ErrorKind::InvalidParameter,
          "random check needs R_lat >= 8");
  std::vector<OracleRow> rows;
  auto small_enough = [&](const TinyAnnulus& t) {
    return annulus_sites(build_disc_domain(t.R_lat), t.r, t.R).sites().size() <= std::size_t(max_sites);
  };
  for (const auto& t : kLoopAnnuli) {
    if (small_enough(t)) rows.push_back(exhaustive("loops-exhaustive", t, derive_seed(seed, 0), threads, loop_mismatches));
  }
  for (const auto& t : kCrossingAnnuli) {
    if (small_enough(t)) {
      rows.push_back(exhaustive("crossings-exhaustive", t, derive_seed(seed, 1), threads, crossing_mismatches));
    }
  }
  if (n_random > 0) {
    const auto d = build_disc_domain(random_R_lat);
    const double r = random_R_lat / 4.0;
    const Annulus a = annulus_sites(d, r, random_R_lat);
    const auto bad = parallel_map(std::size_t(n_random), threads, [&](std::size_t t) {
      return loop_mismatches(sample_configuration(d, derive_seed(derive_seed(seed, 2), t)), a);
    });
    rows.push_back({"loops-random", random_R_lat, r, double(random_R_lat), a.sites().size(), n_random,
                    std::accumulate(bad.begin(), bad.end(), std::int64_t{0})});
  }
  return rows;
}

std::string oracle_csv_header() { return "check,R_lat,r,R,sites,configs,mismatches"; }

std::string to_csv(const OracleRow& row) {
  return row.check + ',' + std::to_string(row.R_lat) + ',' + fmt(row.r) + ',' + fmt(row.R) + ',' +
         std::to_string(row.sites) + ',' + std::to_string(row.configs) + ',' +
         std::to_string(row.mismatches);
}

FacesRateRow faces_rate(int R_lat, std::int64_t n, std::uint64_t seed, int threads) {
  require(n > 0, ErrorKind::InvalidParameter, "faces rate needs trials");
  const auto d = build_disc_domain(R_lat);
  const Annulus a = annulus_sites(d, R_lat / 2.0, R_lat);
  const auto hit = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    return char(detect_good_faces(sample_configuration(d, derive_seed(seed, t)), a).has_value());
  });
  FacesRateRow row;
  row.R_lat = R_lat;
  row.n = n;
  row.hits = std::count(hit.begin(), hit.end(), char(1));
  row.rate = double(row.hits) / double(n);
  row.ci = wilson_interval(row.hits, n);
  row.seed = seed;
  return row;
}

std::string faces_csv_header() { return "R_lat,n,hits,rate,ci_lower,ci_upper,seed"; }

std::string to_csv(const FacesRateRow& row) {
  return std::to_string(row.R_lat) + ',' + std::to_string(row.n) + ',' + std::to_string(row.hits) +
         ',' + fmt(row.rate) + ',' + fmt(row.ci.lower) + ',' + fmt(row.ci.upper) + ',' +
         std::to_string(row.seed);
}

QuasiMultRow quasi_multiplicativity(const std::string& sigma, double r1, double r2, double r3,
                                    double r4, int R_lat, std::int64_t n, std::uint64_t seed,
                                    int threads) {
  require(r1 < r2 && r2 <= r3 && r3 < r4 && r4 <= R_lat, ErrorKind::InvalidParameter,
          "need r1 < r2 <= r3 < r4 <= R_lat");
  require(n > 0, ErrorKind::InvalidParameter, "quasi-multiplicativity needs trials");
  const ColorSequence seq = ColorSequence::parse(sigma);
  const auto d = build_disc_domain(R_lat);
  const Annulus a14 = annulus_sites(d, r1, r4), a12 = annulus_sites(d, r1, r2),
                a34 = annulus_sites(d, r3, r4);
  const auto flags = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    const Configuration c = sample_configuration(d, derive_seed(seed, t));
    return int(detect_arms(c, a14, seq)) | int(detect_arms(c, a12, seq)) << 1 |
           int(detect_arms(c, a34, seq)) << 2;
  });
  std::int64_t h14 = 0, h12 = 0, h34 = 0, bad = 0;
  for (int f : flags) {
    h14 += f & 1;
    h12 += (f >> 1) & 1;
    h34 += (f >> 2) & 1;
    bad += (f & 1) && (f & 6) != 6;
  }
  QuasiMultRow row{r1, r2, r3, r4, R_lat, n};
  row.p14 = double(h14) / double(n);
  row.p12 = double(h12) / double(n);
  row.p34 = double(h34) / double(n);
  row.ratio = row.p12 > 0 && row.p34 > 0 ? row.p14 / (row.p12 * row.p34) : 0.0;
  if (h14 > 0 && h12 > 0 && h34 > 0) {
    auto rel = [&](std::int64_t h) { return (1.0 - double(h) / double(n)) / double(h); };
    row.ratio_se = row.ratio * std::sqrt(rel(h14) + rel(h12) + rel(h34));
  }
  row.inclusion_violations = bad;
  row.seed = seed;
  return row;
}

std::string quasi_csv_header() {
  return "r1,r2,r3,r4,R_lat,n,p14,p12,p34,ratio,ratio_se,inclusion_violations,seed";
}

std::string to_csv(const QuasiMultRow& row) {
  return fmt(row.r1) + ',' + fmt(row.r2) + ',' + fmt(row.r3) + ',' + fmt(row.r4) + ',' +
         std::to_string(row.R_lat) + ',' + std::to_string(row.n) + ',' + fmt(row.p14) + ',' +
         fmt(row.p12) + ',' + fmt(row.p34) + ',' + fmt(row.ratio) + ',' + fmt(row.ratio_se) + ',' +
         std::to_string(row.inclusion_violations) + ',' + std::to_string(row.seed);
}

}  // namespace armwind
