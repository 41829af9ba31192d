#include "armwind/winding_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "armwind/conditioning.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"
#include "armwind/walker.hpp"

namespace armwind {

std::string to_string(WindingEvent e) {
  switch (e) {
    case WindingEvent::ExplorationHitsOrigin: return "exploration";
    case WindingEvent::TwoArms: return "two-arm";
    case WindingEvent::TwoArmsIicApprox: return "iic-approx";
  }
  return "?";
}

WindingEvent parse_winding_event(const std::string& name) {
  if (name == "exploration") return WindingEvent::ExplorationHitsOrigin;
  if (name == "two-arm" || name == "conditional") return WindingEvent::TwoArms;
  if (name == "iic-approx") return WindingEvent::TwoArmsIicApprox;
  throw Error(ErrorKind::InvalidParameter, "unknown winding event " + name);
}

OriginPathSampler::OriginPathSampler(int R_lat)
    : domain(build_disc_domain(R_lat)),
      ends(canonical_ends(*domain)),
      boundary(split_boundary(*domain, ends)) {}

std::pair<ExplorationPath, std::int64_t> OriginPathSampler::sample(std::uint64_t seed,
                                                                   std::int64_t budget) const {
  require(budget > 0, ErrorKind::InvalidParameter, "rejection budget must be positive");
  StopRule stop;
  stop.at_origin_hexagon = true;
  for (std::int64_t a = 0; a < budget; ++a) {
    const Configuration c = sample_configuration(domain, derive_seed(seed, std::uint64_t(a)));
    ExplorationPath p = trace_exploration(c, ends, boundary, stop);
    if (p.stop == StopReason::OriginHexagon) return {std::move(p), a + 1};
  }
  throw BudgetExceeded("exploration conditioned on the origin hexagon", budget);
}

WindingSampleSet sample_exploration_winding(int R_lat, std::int64_t n, std::uint64_t seed,
                                            std::int64_t budget, int threads) {
  require(n > 0, ErrorKind::InvalidParameter, "winding needs samples");
  const OriginPathSampler sampler(R_lat);
  const auto res = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    auto [path, attempts] = sampler.sample(derive_seed(seed, t), budget);
    return std::pair<double, std::int64_t>(path.cum_winding.back(), attempts);
  });
  WindingSampleSet out;
  out.R_lat = R_lat;
  out.event = WindingEvent::ExplorationHitsOrigin;
  out.seed = seed;
  for (const auto& [theta, a] : res) {
    out.samples.push_back(theta);
    out.attempts.push_back(a);
  }
  return out;
}

namespace {

double ccw_offset(double from, double to) {
  constexpr double kTwoPi = 2 * std::numbers::pi;
  double x = std::fmod(to - from, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x;
}

}  // namespace

double blue_arm_winding(const Configuration& config, const Annulus& annulus, double start_angle) {
  const DiscreteDomain& d = config.domain();
  const std::vector<Strand> strands = interface_strands(config, annulus);
  const Strand* pick = nullptr;
  double best = 10.0;
  for (const Strand& s : strands) {
    if (!s.crossing()) continue;
    const Vertex outer = s.ends_inner ? s.vertices.front() : s.vertices.back();
    const double off = ccw_offset(start_angle, std::arg(outer.position()));
    if (off < best) {
      best = off;
      pick = &s;
    }
  }
  require(pick != nullptr, ErrorKind::InvalidInput, "no crossing interface to pick an arm from");

  std::vector<int> hexes;
  for (const DirectedEdge& e : pick->edges) hexes.push_back(e.site);
  if (pick->starts_inner) std::reverse(hexes.begin(), hexes.end());
  // Chronological loop erasure.
  std::vector<int> arm;
  std::vector<int> pos(d.grid_size(), -1);
  for (int h : hexes) {
    if (pos[h] >= 0) {
      for (std::size_t m = std::size_t(pos[h]) + 1; m < arm.size(); ++m) pos[arm[m]] = -1;
      arm.resize(std::size_t(pos[h]) + 1);
      continue;
    }
    pos[h] = int(arm.size());
    arm.push_back(h);
  }
  double theta = 0;
  for (std::size_t m = 0; m + 1 < arm.size(); ++m) {
    const SiteCoord a = d.coord(arm[m]), b = d.coord(arm[m + 1]);
    theta += winding_increment(Vertex{a.i, a.j}, Vertex{b.i, b.j});
  }
  return theta;
}

WindingSampleSet sample_two_arm_winding(int R_lat, std::int64_t n, WindingEvent measure,
                                        ArmRule rule, std::uint64_t seed, std::int64_t budget,
                                        int threads) {
  require(n > 0, ErrorKind::InvalidParameter, "winding needs samples");
  require(measure != WindingEvent::ExplorationHitsOrigin, ErrorKind::InvalidParameter,
          "two-arm winding needs a two-arm measure");
  const int outer = measure == WindingEvent::TwoArmsIicApprox ? 2 * R_lat : R_lat;
  const DomainPtr domain = build_disc_domain(outer);
  const Annulus event_annulus = annulus_sites(domain, 1.0, outer);
  const Annulus measure_annulus = annulus_sites(domain, 1.0, R_lat);
  const double start_angle =
      rule == ArmRule::FromStart ? std::arg(canonical_ends(*domain).a.v.position()) : std::numbers::pi;

  const auto res = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    const std::uint64_t s = derive_seed(seed, t);
    for (std::int64_t a = 0; a < budget; ++a) {
      const Configuration c = sample_configuration(domain, derive_seed(s, std::uint64_t(a)));
      if (count_interface_crossings(c, event_annulus) < 2) continue;
      return std::pair<double, std::int64_t>(blue_arm_winding(c, measure_annulus, start_angle), a + 1);
    }
    throw BudgetExceeded("two-arm conditioning", budget);
  });
  WindingSampleSet out;
  out.R_lat = R_lat;
  out.event = measure;
  out.seed = seed;
  for (const auto& [theta, a] : res) {
    out.samples.push_back(theta);
    out.attempts.push_back(a);
  }
  return out;
}

WindingRow summarize(const WindingSampleSet& set) {
  WindingRow row;
  row.R_lat = set.R_lat;
  row.event = to_string(set.event);
  row.n = std::int64_t(set.samples.size());
  row.seed = set.seed;
  row.mean = mean(set.samples);
  if (set.samples.size() >= 3) {
    row.var = variance(set.samples);
    row.var_stderr = jackknife_variance_stderr(set.samples);
    row.ks = ks_standard_normal(set.samples).statistic;
  }
  return row;
}

std::string winding_csv_header() { return "R_lat,event,n,mean,var,var_stderr,ks,seed"; }

std::string to_csv(const WindingRow& row) {
  std::ostringstream os;
  os.precision(12);
  os << row.R_lat << ',' << row.event << ',' << row.n << ',' << row.mean << ',' << row.var << ','
     << row.var_stderr << ',' << row.ks << ',' << row.seed;
  return os.str();
}

FitResult fit_log_slope(const std::vector<WindingRow>& rows) {
  require(rows.size() >= 3, ErrorKind::InvalidInput, "slope fit needs at least three scales");
  std::vector<double> x, y, w;
  FitResult out;
  for (const WindingRow& r : rows) {
    require(r.R_lat > 0 && r.var_stderr > 0, ErrorKind::InvalidInput,
            "slope fit needs positive scales and stderrs");
    x.push_back(std::log(double(r.R_lat)));
    y.push_back(r.var);
    w.push_back(1.0 / (r.var_stderr * r.var_stderr));
    out.points.push_back({x.back(), r.var, r.var_stderr});
  }
  const LinearFit f = weighted_linear_fit(x, y, w);
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.slope_stderr = f.slope_stderr;
  return out;
}

std::string to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["slope"] = fit.slope;
  j["stderr"] = fit.slope_stderr;
  j["intercept"] = fit.intercept;
  j["points"] = nlohmann::ordered_json::array();
  for (const FitPoint& p : fit.points) {
    j["points"].push_back({{"log_R", p.log_R}, {"var", p.variance}, {"var_stderr", p.variance_stderr}});
  }
  return j.dump(2);
}

std::vector<double> decomposition_radii(int R_lat, double epsilon) {
  require(epsilon > 0 && epsilon < 1, ErrorKind::InvalidParameter, "epsilon must be in (0,1)");
  const int J = int(std::floor(std::log(double(R_lat)) / std::log(1.0 / epsilon) + 1e-12));
  std::vector<double> radii;
  for (int j = 0; j <= J; ++j) radii.push_back(R_lat * std::pow(epsilon, j));
  return radii;
}

std::vector<double> segment_windings(const ExplorationPath& path, const std::vector<double>& radii) {
  std::vector<double> out;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    std::size_t end = path.size() - 1;
    if (j + 1 < radii.size()) {
      const auto hit = first_hit(path, radii[j + 1]);
      require(hit.has_value(), ErrorKind::InvalidInput, "path never reaches the annulus");
      end = *hit;
    }
    const std::size_t start = last_exit(path, radii[j], end).value_or(0);
    out.push_back(path.cum_winding[end] - path.cum_winding[start]);
  }
  return out;
}

DecompositionReport annulus_decomposition_check(int R_lat, double epsilon, std::int64_t n,
                                                std::uint64_t seed, std::int64_t budget,
                                                int threads) {
  require(epsilon > 10.0 / R_lat && epsilon < 0.5, ErrorKind::InvalidParameter,
          "decomposition needs 10/R_lat < epsilon < 1/2");
  DecompositionReport rep;
  rep.R_lat = R_lat;
  rep.epsilon = epsilon;
  rep.n = n;
  rep.radii = decomposition_radii(R_lat, epsilon);
  const OriginPathSampler sampler(R_lat);
  const auto res = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    auto [path, attempts] = sampler.sample(derive_seed(seed, t), budget);
    std::vector<double> v = segment_windings(path, rep.radii);
    v.push_back(path.cum_winding.back());
    return v;
  });
  std::vector<double> total;
  for (const auto& v : res) total.push_back(v.back());
  rep.variance = variance(total);
  for (std::size_t j = 0; j < rep.radii.size(); ++j) {
    std::vector<double> sq;
    for (const auto& v : res) sq.push_back(v[j] * v[j]);
    rep.segment_m2.push_back(mean(sq));
    rep.segment_m2_se.push_back(mean_stderr(sq));
    rep.sum_m2 += rep.segment_m2.back();
  }
  rep.difference = std::abs(rep.variance - rep.sum_m2);
  rep.bound_scale = std::log(double(R_lat)) / std::sqrt(std::log(1.0 / epsilon));
  return rep;
}

SegmentMoments segment_moment_check(int R_lat, double r, double R, std::int64_t n,
                                    std::uint64_t seed, std::int64_t budget, int threads) {
  require(r >= 1 && r <= R / 2 && R <= R_lat, ErrorKind::InvalidParameter,
          "segment moments need 1 <= r <= R/2, R <= R_lat");
  const OriginPathSampler sampler(R_lat);
  const auto res = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    auto [path, attempts] = sampler.sample(derive_seed(seed, t), budget);
    const std::size_t tau_r = first_hit(path, r).value();
    const std::size_t tau_R = first_hit(path, R).value();
    const std::size_t last = last_exit(path, R, tau_r).value_or(0);
    const double inner = path.cum_winding[tau_r] - path.cum_winding[last];
    const double outer = last > tau_R ? path.cum_winding[last] - path.cum_winding[tau_R] : 0.0;
    return std::pair<double, double>(inner, outer);
  });
  SegmentMoments m;
  m.R_lat = R_lat;
  m.r = r;
  m.R = R;
  m.n = n;
  std::vector<double> a, s2, s4, o2;
  for (const auto& [in, out] : res) {
    a.push_back(std::abs(in));
    s2.push_back(in * in);
    s4.push_back(in * in * in * in);
    o2.push_back(out * out);
  }
  m.abs_mean = mean(a);
  m.m2 = mean(s2);
  m.m2_se = mean_stderr(s2);
  m.m4 = mean(s4);
  m.outer_m2 = mean(o2);
  m.outer_m2_se = mean_stderr(o2);
  return m;
}

CrossingTailReport crossings_tail(int R_lat, double r, double R, const std::vector<double>& K_grid,
                                  std::int64_t n, std::uint64_t seed, int threads) {
  require(n > 0 && r >= 1 && r < R && R <= R_lat, ErrorKind::InvalidParameter,
          "crossing tail needs 1 <= r < R <= R_lat");
  const DomainPtr domain = build_disc_domain(R_lat);
  CrossingTailReport rep;
  rep.R_lat = R_lat;
  rep.r = r;
  rep.R = R;
  rep.counts = parallel_map(std::size_t(n), threads, [&](std::size_t t) {
    const Configuration c = sample_configuration(domain, derive_seed(seed, t));
    return max_sector_crossings(c, r, R, std::numbers::pi / 10, Color::Blue);
  });
  const double L = std::log(R / r);
  std::vector<double> x, y, w;
  for (double K : K_grid) {
    CrossingTailRow row;
    row.K = K;
    row.threshold = int(std::ceil(K * L - 1e-12));
    row.n = n;
    row.hits = std::count_if(rep.counts.begin(), rep.counts.end(),
                             [&](int c) { return c >= row.threshold; });
    row.freq = double(row.hits) / double(n);
    rep.rows.push_back(row);
    if (row.hits > 0 && row.hits < n) {
      x.push_back(K);
      y.push_back(std::log(row.freq));
      w.push_back(double(row.hits) / (1.0 - row.freq));
    }
  }
  if (x.size() >= 2) rep.fit = weighted_linear_fit(x, y, w);
  return rep;
}

}  // namespace armwind
