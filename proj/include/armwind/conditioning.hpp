#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "armwind/arms.hpp"
#include "armwind/lattice.hpp"
#include "armwind/stats.hpp"

namespace armwind {

using EventPredicate = std::function<bool(const Configuration&)>;

struct ConditionedSample {
  Configuration config;
  std::string event;
  std::int64_t attempts = 0;
  std::uint64_t seed = 0;  // master seed of this sample; attempt a used derive_seed(seed, a)
};

/// Exact rejection sampling: draws fresh configurations until `event` holds.
ConditionedSample sample_conditioned(DomainPtr domain, const EventPredicate& event,
                                     const std::string& tag, std::int64_t budget,
                                     std::uint64_t seed);

/// Canonical exploration endpoints, the e-vertices nearest 1 and -1.
EVertexPair canonical_ends(const DiscreteDomain& domain);

/// The exploration between `ends` touches the origin hexagon.
EventPredicate event_exploration_hits_origin(DomainPtr domain, EVertexPair ends);
/// Arm sequence for k in {1, 2, 4}: (B), (B,Y), (B,Y,B,Y).
ColorSequence k_arm_sequence(int k);
/// k-arm event on A(r, R), lattice units.
EventPredicate event_k_arms(DomainPtr domain, int k, double r, double R);
/// Good-faces event on A(R, 2R).
EventPredicate event_good_faces(DomainPtr domain, double R);

struct PStarSample {
  Faces faces;
  Configuration config;
  std::int64_t face_attempts = 0;
  std::int64_t interior_attempts = 0;
  std::uint64_t seed = 0;
};

/// Faces from P[. | good faces on A(R, 2R)] with R = R_lat/2, then the sites
/// inside the faces resampled until both arms reach the origin's neighbors.
/// The two stages use the streams derive_seed(seed, 0, a) and derive_seed(seed, 1, a).
PStarSample sample_p_star(int R_lat, std::uint64_t seed, std::int64_t budget);

/// One sample of P[. | k arms on A(1, R)] in the disc of radius R for each R.
std::vector<ConditionedSample> iic_approx_sample(int k, double r_obs,
                                                 const std::vector<int>& R_schedule,
                                                 std::uint64_t seed, std::int64_t budget);

enum class Functional { Crossings, Arms, Winding };

Functional parse_functional(const std::string& name);
std::string to_string(Functional f);

struct DecorrelationReport {
  int k = 0;
  double r = 0.0;
  double rprime = 0.0;
  int R = 0;
  Functional functional = Functional::Crossings;
  double tv = 0.0;
  Interval ci;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Functional of a configuration that only looks outside the disc of radius rprime.
std::int64_t evaluate_functional(Functional f, const Configuration& config, int k, double rprime);

/// TV distance between the laws of a functional under P[. | k arms on A(1, R)]
/// and P[. | k arms on A(r, R)], one report per rprime; both sides share their
/// samples across rprime values.
std::vector<DecorrelationReport> decorrelation_experiment(int k, double r,
                                                          const std::vector<double>& rprimes,
                                                          int R, Functional functional,
                                                          std::int64_t n, std::uint64_t seed,
                                                          std::int64_t budget, int threads);

std::string decorrelation_csv_header();
std::string to_csv(const DecorrelationReport& row);

}  // namespace armwind
