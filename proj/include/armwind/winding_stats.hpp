#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armwind/arms.hpp"
#include "armwind/exploration.hpp"
#include "armwind/stats.hpp"

namespace armwind {

/// Conditioning events of the winding experiments.
enum class WindingEvent {
  ExplorationHitsOrigin,  // exploration 1 -> -1 touches the origin hexagon
  TwoArms,                // (B,Y) arms across A(1, R_lat)
  TwoArmsIicApprox,       // (B,Y) arms across A(1, 2 R_lat) in the doubled disc
};

std::string to_string(WindingEvent e);
WindingEvent parse_winding_event(const std::string& name);

struct WindingSampleSet {
  int R_lat = 0;
  WindingEvent event = WindingEvent::ExplorationHitsOrigin;
  std::vector<double> samples;
  std::vector<std::int64_t> attempts;
  std::uint64_t seed = 0;
};

struct WindingRow {
  int R_lat = 0;
  std::string event;
  std::int64_t n = 0;
  double mean = 0.0;
  double var = 0.0;
  double var_stderr = 0.0;
  double ks = 0.0;
  std::uint64_t seed = 0;
};

/// Exploration from the canonical ends stopped on the origin hexagon, drawn by
/// rejection until it touches it; attempt a uses derive_seed(seed, a).
struct OriginPathSampler {
  DomainPtr domain;
  EVertexPair ends;
  BoundaryColoring boundary;

  explicit OriginPathSampler(int R_lat);
  /// Accepted path plus the attempt count.
  std::pair<ExplorationPath, std::int64_t> sample(std::uint64_t seed, std::int64_t budget) const;
};

/// Winding of the exploration up to its first origin-hexagon contact,
/// conditioned on that contact; trial t uses seed derive_seed(seed, t).
WindingSampleSet sample_exploration_winding(int R_lat, std::int64_t n, std::uint64_t seed,
                                            std::int64_t budget, int threads);

/// Arm-selection rule for the two-arm winding.
enum class ArmRule {
  FromStart,  // first crossing counterclockwise from the exploration start point
  FromPi,     // first crossing counterclockwise from angle pi
};

/// Winding of the chosen blue arm (outer to inner, loop-erased, site centers)
/// of a configuration with at least two crossings of `annulus`.
double blue_arm_winding(const Configuration& config, const Annulus& annulus, double start_angle);

WindingSampleSet sample_two_arm_winding(int R_lat, std::int64_t n, WindingEvent measure,
                                        ArmRule rule, std::uint64_t seed, std::int64_t budget,
                                        int threads);

WindingRow summarize(const WindingSampleSet& set);
std::string winding_csv_header();
std::string to_csv(const WindingRow& row);

struct FitPoint {
  double log_R = 0.0;
  double variance = 0.0;
  double variance_stderr = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<FitPoint> points;
};

/// Weighted fit of variance against log(R_lat), weights 1/stderr^2.
FitResult fit_log_slope(const std::vector<WindingRow>& rows);
std::string to_json(const FitResult& fit);

struct DecompositionReport {
  int R_lat = 0;
  double epsilon = 0.0;
  std::vector<double> radii;           // R_lat * epsilon^j
  std::vector<double> segment_m2;      // E[theta(T_j, tau_{j+1})^2]
  std::vector<double> segment_m2_se;
  double variance = 0.0;
  double sum_m2 = 0.0;
  double difference = 0.0;
  double bound_scale = 0.0;            // log(R_lat) / sqrt(log(1/epsilon))
  std::int64_t n = 0;
};

/// Geometric radii R_lat * eps^j, j = 0..J with J = floor(log(R_lat) / log(1/eps)).
std::vector<double> decomposition_radii(int R_lat, double epsilon);
/// Per-annulus windings of one path; the last segment ends at the path's end.
std::vector<double> segment_windings(const ExplorationPath& path, const std::vector<double>& radii);

DecompositionReport annulus_decomposition_check(int R_lat, double epsilon, std::int64_t n,
                                                std::uint64_t seed, std::int64_t budget,
                                                int threads);

struct SegmentMoments {
  int R_lat = 0;
  double r = 0.0;
  double R = 0.0;
  std::int64_t n = 0;  // paths reaching radius r before the origin
  double abs_mean = 0.0;  // E|theta(T_{R,r}, tau_r)|
  double m2 = 0.0;
  double m4 = 0.0;
  double m2_se = 0.0;
  double outer_m2 = 0.0;  // E[theta(tau_R, T_{R,r})^2]
  double outer_m2_se = 0.0;
};

SegmentMoments segment_moment_check(int R_lat, double r, double R, std::int64_t n,
                                    std::uint64_t seed, std::int64_t budget, int threads);

struct CrossingTailRow {
  double K = 0.0;
  int threshold = 0;
  std::int64_t hits = 0;
  std::int64_t n = 0;
  double freq = 0.0;
};

struct CrossingTailReport {
  int R_lat = 0;
  double r = 0.0;
  double R = 0.0;
  std::vector<CrossingTailRow> rows;
  std::vector<int> counts;
  LinearFit fit;  // log frequency against K over rows with hits
};

/// Disjoint blue crossings of the sector {r <= |z| <= R, |arg z| < pi/10}
/// under the unconditioned measure.
CrossingTailReport crossings_tail(int R_lat, double r, double R, const std::vector<double>& K_grid,
                                  std::int64_t n, std::uint64_t seed, int threads);

}  // namespace armwind
