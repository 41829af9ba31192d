#pragma once

// Two-sided radial SLE through its driving SDE
//   dTheta = 2 cot(Theta/2) dt + sqrt(kappa) dW,   -dU = cot(Theta/2) dt + sqrt(kappa) dW,
// with U_0 = 0 and Theta_0 = alpha. Away from the endpoints each step applies the
// exact drift flow cos(Theta'/2) = cos(Theta/2) e^{-dt} and then the noise
// increment; within 0.5 of an endpoint the distance to it is stepped in log
// coordinates. Steps are at most guard * distance^2. A step that leaves
// (0, 2pi) is split in two with a Brownian bridge, so the driving path is
// unchanged by rejections. U is updated through the identity
// dU = -dTheta/2 - (sqrt(kappa)/2) dW, which therefore holds exactly.

#include <complex>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace armwind {

struct SdeParams {
  double kappa = 6.0;
  double alpha = 3.14159265358979323846;
  double dt_max = 1e-3;
  double guard = 0.1;
  bool noiseless = false;
};

struct SdeState {
  double t = 0.0;
  double theta = 0.0;
  double u = 0.0;
  double w = 0.0;
};

struct SdeTrajectory {
  SdeParams params;
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<double> u;
  std::vector<double> w;
  std::size_t size() const { return t.size(); }
  SdeState at(std::size_t k) const { return {t[k], theta[k], u[k], w[k]}; }
};

/// Every accepted step up to horizon T.
SdeTrajectory integrate_two_sided_radial(const SdeParams& params, double T, std::uint64_t seed);

/// States at the given increasing times without storing the path.
std::vector<SdeState> integrate_to_times(const SdeParams& params, const std::vector<double>& times,
                                         std::uint64_t seed);

/// U_t - U_0 at the last stored time <= t. The boundary correction of the
/// exact winding is dropped; it stays bounded in probability.
double winding_estimate(const SdeTrajectory& traj, double t);

struct SecondMomentRow {
  double kappa = 0.0;
  double T = 0.0;
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m2_over_T = 0.0;
  double stderr_ = 0.0;  // of m2_over_T
  double dt_max = 0.0;
  std::uint64_t seed = 0;
};

/// E[(U_T - U_0)^2] / T for each T; path p uses derive_seed(seed, p).
std::vector<SecondMomentRow> second_moment_scan(const SdeParams& params,
                                                const std::vector<double>& T_list,
                                                std::int64_t n_paths, std::uint64_t seed,
                                                int threads);

std::string sle_csv_header();
std::string to_csv(const SecondMomentRow& row);

struct TailRow {
  double s = 0.0;
  std::int64_t hits = 0;
  std::int64_t n = 0;
  double freq = 0.0;
};

/// Empirical P[|U_T - U_0 + (sqrt(kappa)/2) W_T| > s].
std::vector<TailRow> tail_check(const SdeParams& params, double T, std::int64_t n_paths,
                                const std::vector<double>& s_grid, std::uint64_t seed, int threads);

struct TracePoint {
  double t = 0.0;
  std::complex<double> z;
  bool ok = true;
};

/// Trace points gamma(t) at n_points evenly spaced step indices, obtained by
/// composing the inverse radial slit maps of the piecewise-constant driving
/// e^{iU}. Cost grows quadratically with the number of steps.
std::vector<TracePoint> solve_loewner_trace(const SdeTrajectory& traj, std::size_t n_points);

/// Inverse of one radial slit step of duration dt with driving angle c.
std::complex<double> inverse_slit_map(std::complex<double> w, double c, double dt);

struct KoebeCheck {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double worst_ratio = 0.0;  // largest violation factor seen (1 = none)
};

/// Pathwise e^{-tau_eps} in [eps, 4 eps] and dist(0, trace) <= e^{-T} <= 4 dist,
/// both within a multiplicative slack.
KoebeCheck koebe_check(const std::vector<TracePoint>& trace, const std::vector<double>& eps_grid,
                       double slack);

}  // namespace armwind
