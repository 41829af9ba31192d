#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armwind/stats.hpp"

// Experiment harnesses shared by the command-line tool and the acceptance run.

namespace armwind {

struct OracleRow {
  std::string check;  // loops-exhaustive, crossings-exhaustive, loops-random
  int R_lat = 0;
  double r = 0.0;
  double R = 0.0;
  std::size_t sites = 0;  // annulus sites
  std::int64_t configs = 0;
  std::int64_t mismatches = 0;
};

/// Loop predicates against direct arm detection, and the crossing count
/// against the alternating oracle, on every coloring of the tiny annuli with
/// at most `max_sites` sites (max_sites <= 24), then loop predicates on
/// `n_random` random configurations of the disc of radius `random_R_lat`.
std::vector<OracleRow> oracle_verify(int max_sites, std::int64_t n_random, int random_R_lat,
                                     std::uint64_t seed, int threads);
std::string oracle_csv_header();
std::string to_csv(const OracleRow& row);

struct FacesRateRow {
  int R_lat = 0;
  std::int64_t n = 0;
  std::int64_t hits = 0;
  double rate = 0.0;
  Interval ci;
  std::uint64_t seed = 0;
};

/// Frequency of the good-faces event on A(R_lat/2, R_lat); trial t uses
/// derive_seed(seed, t).
FacesRateRow faces_rate(int R_lat, std::int64_t n, std::uint64_t seed, int threads);
std::string faces_csv_header();
std::string to_csv(const FacesRateRow& row);

struct QuasiMultRow {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  int R_lat = 0;
  std::int64_t n = 0;
  double p14 = 0.0, p12 = 0.0, p34 = 0.0;
  double ratio = 0.0;
  double ratio_se = 0.0;  // delta method
  std::int64_t inclusion_violations = 0;  // A(r1,r4) without A(r1,r2) and A(r3,r4)
  std::uint64_t seed = 0;
};

/// P[A(r1,r4)] / (P[A(r1,r2)] P[A(r3,r4)]) from one set of configurations.
QuasiMultRow quasi_multiplicativity(const std::string& sigma, double r1, double r2, double r3,
                                    double r4, int R_lat, std::int64_t n, std::uint64_t seed,
                                    int threads);
std::string quasi_csv_header();
std::string to_csv(const QuasiMultRow& row);

}  // namespace armwind
