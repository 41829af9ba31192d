#include "armwind/sle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "armwind/error.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"
#include "armwind/stats.hpp"

namespace armwind {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kMinDt = 1e-300;
// Below this distance to an endpoint the angle is stepped in log coordinates.
constexpr double kLogZone = 0.5;

void check_params(const SdeParams& p) {
  require(p.kappa > 0 && p.kappa < 8, ErrorKind::InvalidParameter, "kappa must be in (0,8)");
  require(p.alpha > 0 && p.alpha < kTwoPi, ErrorKind::InvalidParameter, "alpha must be in (0,2pi)");
  require(p.dt_max > 0 && p.guard > 0, ErrorKind::InvalidParameter, "step sizes must be positive");
}

// Exact flow of the drift over dt for an angle phi <= pi: cos(phi/2) decays like
// e^{-dt}. Written with the half-angle sine so small angles keep full precision.
double drift_flow(double phi, double dt) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  const double s_new = std::sqrt(s * s - c * c * std::expm1(-2 * dt));
  return 2 * std::atan2(s_new, c * std::exp(-dt));
}

// The angle is held as its distance to the nearest endpoint, so that both ends
// resolve equally well.
struct Side {
  double phi;
  bool upper;

  double theta() const {
    return upper ? std::min(kTwoPi - phi, std::nextafter(kTwoPi, 0.0)) : phi;
  }
};

Side side_of(double theta) {
  return theta > std::numbers::pi ? Side{kTwoPi - theta, true} : Side{theta, false};
}

class Integrator {
 public:
  Integrator(const SdeParams& p, std::uint64_t seed)
      : p_(p), rng_(seed), sqrt_kappa_(std::sqrt(p.kappa)), side_(side_of(p.alpha)) {
    s_.theta = p.alpha;
  }

  const SdeState& state() const { return s_; }

  /// Advance one accepted piece, never past `target`. Returns false at target.
  bool advance(double target) {
    if (s_.t >= target) return false;
    if (pending_.empty()) {
      double dt = std::min(p_.dt_max, p_.guard * side_.phi * side_.phi);
      if (target - s_.t < dt || target - s_.t - dt < 1e-13) dt = target - s_.t;
      pending_.push_back({dt, p_.noiseless ? 0.0 : std::sqrt(dt) * normal_(rng_)});
    }
    while (true) {
      const Piece piece = pending_.back();
      const double phi = side_.phi;
      const double dw = side_.upper ? -piece.dw : piece.dw;
      double next;
      if (phi < kLogZone) {
        // Near an endpoint the process is close to a Bessel process; Euler in log
        // coordinates keeps the distance positive.
        const double drift = 2 / (std::tan(phi / 2) * phi) - p_.kappa / (2 * phi * phi);
        next = phi * std::exp(drift * piece.dt + sqrt_kappa_ / phi * dw);
      } else {
        next = drift_flow(phi, piece.dt) + sqrt_kappa_ * dw;
      }
      // Pieces drawn at a coarser scale are refined once the angle nears an endpoint.
      if (next > 0 && next < kTwoPi && std::isfinite(next) && piece.dt <= p_.guard * phi * phi) {
        pending_.pop_back();
        side_ = next > std::numbers::pi ? Side{kTwoPi - next, !side_.upper} : Side{next, side_.upper};
        const double theta = side_.theta();
        s_.u += -(theta - s_.theta) / 2 - sqrt_kappa_ / 2 * piece.dw;
        s_.theta = theta;
        s_.w += piece.dw;
        s_.t = pending_.empty() && target - (s_.t + piece.dt) < 1e-13 ? target : s_.t + piece.dt;
        return true;
      }
      if (piece.dt / 2 < kMinDt) throw IntegrationFailure("step size collapsed", s_.t);
      // Brownian bridge split: the first half is tried next.
      pending_.pop_back();
      const double h = piece.dt / 2;
      const double first = piece.dw / 2 + std::sqrt(h / 2) * normal_(rng_);
      pending_.push_back({h, piece.dw - first});
      pending_.push_back({h, first});
    }
  }

 private:
  struct Piece {
    double dt;
    double dw;
  };

  SdeParams p_;
  Xoshiro256 rng_;
  std::normal_distribution<double> normal_;
  double sqrt_kappa_;
  Side side_;
  SdeState s_;
  std::vector<Piece> pending_;
};

}  // namespace

SdeTrajectory integrate_two_sided_radial(const SdeParams& params, double T, std::uint64_t seed) {
  check_params(params);
  require(T > 0, ErrorKind::InvalidParameter, "horizon must be positive");
  Integrator in(params, seed);
  SdeTrajectory out;
  out.params = params;
  auto store = [&] {
    const SdeState& s = in.state();
    out.t.push_back(s.t);
    out.theta.push_back(s.theta);
    out.u.push_back(s.u);
    out.w.push_back(s.w);
  };
  store();
  while (in.advance(T)) store();
  return out;
}

std::vector<SdeState> integrate_to_times(const SdeParams& params, const std::vector<double>& times,
                                         std::uint64_t seed) {
  check_params(params);
  Integrator in(params, seed);
  std::vector<SdeState> out;
  double prev = 0;
  for (double t : times) {
    require(t > prev || (t == 0 && out.empty()), ErrorKind::InvalidParameter,
            "times must be increasing and positive");
    while (in.advance(t)) {
    }
    out.push_back(in.state());
    prev = t;
  }
  return out;
}

double winding_estimate(const SdeTrajectory& traj, double t) {
  require(!traj.t.empty() && t >= 0 && t <= traj.t.back() + 1e-12, ErrorKind::InvalidParameter,
          "time outside the trajectory");
  const auto it = std::upper_bound(traj.t.begin(), traj.t.end(), t + 1e-12);
  const std::size_t k = std::size_t(it - traj.t.begin()) - 1;
  return traj.u[k] - traj.u[0];
}

std::vector<SecondMomentRow> second_moment_scan(const SdeParams& params,
                                                const std::vector<double>& T_list,
                                                std::int64_t n_paths, std::uint64_t seed,
                                                int threads) {
  require(n_paths >= 2, ErrorKind::InvalidParameter, "second moment needs paths");
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    require(T_list[i] > 0 && (i == 0 || T_list[i] > T_list[i - 1]), ErrorKind::InvalidParameter,
            "T list must be increasing");
  }
  const auto states = parallel_map(std::size_t(n_paths), threads, [&](std::size_t p) {
    return integrate_to_times(params, T_list, derive_seed(seed, p));
  });
  std::vector<SecondMomentRow> rows;
  for (std::size_t i = 0; i < T_list.size(); ++i) {
    std::vector<double> x, x2;
    for (const auto& s : states) {
      x.push_back(s[i].u);
      x2.push_back(s[i].u * s[i].u / T_list[i]);
    }
    SecondMomentRow r;
    r.kappa = params.kappa;
    r.T = T_list[i];
    r.n = n_paths;
    r.mean = mean(x);
    r.m2_over_T = mean(x2);
    r.m2 = r.m2_over_T * T_list[i];
    r.stderr_ = mean_stderr(x2);
    r.dt_max = params.dt_max;
    r.seed = seed;
    rows.push_back(r);
  }
  return rows;
}

std::string sle_csv_header() { return "kappa,T,n,mean,m2,m2_over_T,stderr,dt_max,seed"; }

std::string to_csv(const SecondMomentRow& r) {
  std::ostringstream os;
  os.precision(12);
  os << r.kappa << ',' << r.T << ',' << r.n << ',' << r.mean << ',' << r.m2 << ',' << r.m2_over_T
     << ',' << r.stderr_ << ',' << r.dt_max << ',' << r.seed;
  return os.str();
}

std::vector<TailRow> tail_check(const SdeParams& params, double T, std::int64_t n_paths,
                                const std::vector<double>& s_grid, std::uint64_t seed,
                                int threads) {
  require(n_paths > 0, ErrorKind::InvalidParameter, "tail check needs paths");
  const double half_sqrt_kappa = std::sqrt(params.kappa) / 2;
  const auto vals = parallel_map(std::size_t(n_paths), threads, [&](std::size_t p) {
    const SdeState s = integrate_to_times(params, {T}, derive_seed(seed, p)).back();
    return std::abs(s.u + half_sqrt_kappa * s.w);
  });
  std::vector<TailRow> rows;
  for (double s : s_grid) {
    TailRow r;
    r.s = s;
    r.n = n_paths;
    r.hits = std::count_if(vals.begin(), vals.end(), [&](double v) { return s == 0 || v > s; });
    r.freq = double(r.hits) / double(r.n);
    rows.push_back(r);
  }
  return rows;
}

namespace {

using Complex = std::complex<double>;

// Root of z / (1 + z)^2 = y inside the unit disc.
Complex koebe_inverse(Complex y) {
  const Complex b = 1.0 - 2.0 * y;
  const Complex s = std::sqrt(1.0 - 4.0 * y);
  const Complex q = std::abs(b + s) >= std::abs(b - s) ? b + s : b - s;
  return 2.0 * y / q;
}

}  // namespace

Complex inverse_slit_map(Complex w, double c, double dt) {
  const Complex rot = std::polar(1.0, c);
  const Complex v = w / rot;
  const Complex f = v / ((1.0 + v) * (1.0 + v));
  return rot * koebe_inverse(std::exp(-dt) * f);
}

std::vector<TracePoint> solve_loewner_trace(const SdeTrajectory& traj, std::size_t n_points) {
  const std::size_t steps = traj.size() - 1;
  require(traj.size() >= 2 && n_points >= 1, ErrorKind::InvalidParameter, "trace needs steps");
  std::vector<double> drive(steps), dt(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    drive[k] = 0.5 * (traj.u[k] + traj.u[k + 1]);
    dt[k] = traj.t[k + 1] - traj.t[k];
  }
  std::vector<TracePoint> out;
  out.push_back({0.0, std::polar(1.0, traj.u[0]), true});
  const std::size_t count = std::min(n_points, steps);
  for (std::size_t m = 1; m <= count; ++m) {
    const std::size_t k = (m * steps) / count;  // trace point after k steps
    // Tip of the slit grown during step k-1, pulled back through earlier steps.
    Complex z = std::polar(1.0, drive[k - 1]) * koebe_inverse(std::exp(-dt[k - 1]) * 0.25);
    for (std::size_t j = k - 1; j-- > 0;) z = inverse_slit_map(z, drive[j], dt[j]);
    const bool ok = std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) <= 1.0 + 1e-9;
    out.push_back({traj.t[k], z, ok});
  }
  return out;
}

KoebeCheck koebe_check(const std::vector<TracePoint>& trace, const std::vector<double>& eps_grid,
                       double slack) {
  KoebeCheck c;
  c.worst_ratio = 1.0;
  auto record = [&](double lo, double x, double hi) {
    ++c.checks;
    double ratio = 1.0;
    if (x < lo / slack) ratio = lo / x;
    if (x > hi * slack) ratio = x / hi;
    if (ratio > 1.0) {
      ++c.violations;
      c.worst_ratio = std::max(c.worst_ratio, ratio);
    }
  };
  double dist = std::numeric_limits<double>::infinity();
  for (const TracePoint& p : trace) {
    if (p.ok) dist = std::min(dist, std::abs(p.z));
  }
  for (double eps : eps_grid) {
    for (const TracePoint& p : trace) {
      if (!p.ok || std::abs(p.z) > eps) continue;
      record(eps, std::exp(-p.t), 4 * eps);
      break;
    }
  }
  const double T = trace.back().t;
  record(dist, std::exp(-T), 4 * dist);
  return c;
}

}  // namespace armwind
