// armwind: command-line front end for the winding and arm-event experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "armwind/arms.hpp"
#include "armwind/conditioning.hpp"
#include "armwind/error.hpp"
#include "armwind/harness.hpp"
#include "armwind/manifest.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"
#include "armwind/sle.hpp"
#include "armwind/stats.hpp"
#include "armwind/winding_stats.hpp"

namespace {

using namespace armwind;
using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 2, kBudget = 3, kNumeric = 4 };

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += num(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

// Files produced by one command. Rows accumulate as the run progresses, so a
// failed run can still write what it has.
struct Outputs {
  std::string csv_header;
  std::vector<std::string> rows;
  Json json = Json::object();
  std::vector<std::string> summary;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<std::map<std::string, std::string>()> params;
  std::function<void(Outputs&)> run;
  std::string csv_name;
  std::string json_name;
};

struct Globals {
  std::uint64_t seed = 42;
  int threads = 1;
  std::string out_dir = ".";
  std::int64_t budget = 10'000'000;
  std::string config;
};

void apply_config(const std::string& path, CLI::App& app, CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) + ": unknown key " + key);
    }
    if (opt->count() > 0) continue;  // flags win over the file
    opt->add_result(value);
    opt->run_callback();
  }
}

std::string csv_text(const Outputs& o, const std::string& hash, const std::string& status) {
  std::string s = "# manifest " + hash + "\n# status " + status + "\n" + o.csv_header + "\n";
  for (const auto& r : o.rows) s += r + "\n";
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + p.string());
  out << text;
}

// ---------------------------------------------------------------- commands

std::vector<WindingRow> run_winding(const std::vector<int>& radii, std::int64_t n,
                                    WindingEvent event, ArmRule rule, const Globals& g,
                                    Outputs& out) {
  std::vector<WindingRow> rows;
  for (int R : radii) {
    const std::uint64_t seed = derive_seed(g.seed, std::uint64_t(R));
    const WindingSampleSet set =
        event == WindingEvent::ExplorationHitsOrigin
            ? sample_exploration_winding(R, n, seed, g.budget, g.threads)
            : sample_two_arm_winding(R, n, event, rule, seed, g.budget, g.threads);
    rows.push_back(summarize(set));
    rows.back().seed = g.seed;
    out.rows.push_back(to_csv(rows.back()));
  }
  return rows;
}

ArmRule parse_rule(const std::string& s) {
  if (s == "start") return ArmRule::FromStart;
  if (s == "pi") return ArmRule::FromPi;
  throw Error(ErrorKind::InvalidParameter, "rule must be start or pi");
}

void add_winding_scan(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("winding-scan", "Winding variance against log R_lat, with slope fit");
  struct P {
    std::vector<int> radii{32, 64, 128, 256, 512};
    std::int64_t samples = 10000;
    std::string event = "exploration";
    std::string rule = "start";
  };
  auto p = std::make_shared<P>();
  sub->add_option("--radii", p->radii, "Disc radii in lattice units")->delimiter(',');
  sub->add_option("--samples", p->samples, "Accepted samples per radius");
  sub->add_option("--event", p->event, "exploration | two-arm | iic-approx");
  sub->add_option("--rule", p->rule, "Arm choice for two-arm events: start | pi");
  Command c{sub, nullptr, nullptr, "winding-scan.csv", "winding-scan.json"};
  c.params = [p] {
    return std::map<std::string, std::string>{{"radii", join(p->radii)},
                                              {"samples", std::to_string(p->samples)},
                                              {"event", p->event},
                                              {"rule", p->rule}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = winding_csv_header();
    const WindingEvent ev = parse_winding_event(p->event);
    const auto rows = run_winding(p->radii, p->samples, ev, parse_rule(p->rule), g, out);
    if (rows.size() >= 3) {
      const FitResult fit = fit_log_slope(rows);
      out.json["fit"] = Json::parse(to_json(fit));
      out.json["ks_largest_radius"] = rows.back().ks;
      out.summary.push_back("slope " + num(fit.slope) + " +- " + num(fit.slope_stderr));
    }
    out.summary.push_back("ks at R_lat " + std::to_string(rows.back().R_lat) + ": " + num(rows.back().ks));
  };
  cmds.push_back(c);
}

void add_two_arm_scan(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("two-arm-scan", "Winding under the exploration event and the two-arm event");
  struct P {
    int R_lat = 256;
    std::int64_t samples = 10000;
    std::string rule = "start";
    std::string measure = "two-arm";
    double allowance_scale = 1.0;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--R-lat", p->R_lat, "Disc radius in lattice units");
  sub->add_option("--samples", p->samples, "Samples per event");
  sub->add_option("--rule", p->rule, "Arm choice: start | pi");
  sub->add_option("--measure", p->measure, "two-arm | iic-approx");
  sub->add_option("--allowance-scale", p->allowance_scale, "Multiplier of (log R_lat)^(6/7)");
  Command c{sub, nullptr, nullptr, "two-arm-scan.csv", "two-arm-scan.json"};
  c.params = [p] {
    return std::map<std::string, std::string>{{"R_lat", std::to_string(p->R_lat)},
                                              {"samples", std::to_string(p->samples)},
                                              {"rule", p->rule},
                                              {"measure", p->measure},
                                              {"allowance_scale", num(p->allowance_scale)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = winding_csv_header();
    const auto a = run_winding({p->R_lat}, p->samples, WindingEvent::ExplorationHitsOrigin,
                               ArmRule::FromStart, g, out)[0];
    const WindingEvent measure = parse_winding_event(p->measure);
    require(measure != WindingEvent::ExplorationHitsOrigin, ErrorKind::InvalidParameter,
            "measure must be a two-arm event");
    const auto b = run_winding({p->R_lat}, p->samples, measure, parse_rule(p->rule), g, out)[0];
    const double diff = std::abs(b.var - a.var);
    const double sigma = std::hypot(a.var_stderr, b.var_stderr);
    const double allowance = p->allowance_scale * std::pow(std::log(double(p->R_lat)), 6.0 / 7.0);
    const double se_a = std::sqrt(a.var / double(a.n)), se_b = std::sqrt(b.var / double(b.n));
    out.json["variance_difference"] = diff;
    out.json["combined_sigma"] = sigma;
    out.json["allowance"] = allowance;
    out.json["within"] = diff <= 3 * sigma + allowance;
    out.json["mean_exploration_ok"] = std::abs(a.mean) <= std::numbers::pi + 3 * se_a;
    out.json["mean_two_arm_ok"] = std::abs(b.mean) <= 2 * std::numbers::pi + 3 * se_b;
    out.summary.push_back("variance difference " + num(diff) + " (3 sigma " + num(3 * sigma) +
                          ", allowance " + num(allowance) + ")");
  };
  cmds.push_back(c);
}

struct SdeOptions {
  double kappa = 6.0;
  double alpha = std::numbers::pi;
  double dt_max = 1e-3;
  double guard = 0.1;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa, "SLE parameter in (0,8)");
    sub->add_option("--alpha", alpha, "Initial angle in (0,2pi)");
    sub->add_option("--dt-max", dt_max, "Largest time step");
    sub->add_option("--guard", guard, "Step guard near the endpoints");
  }
  SdeParams params() const {
    SdeParams s;
    s.kappa = kappa;
    s.alpha = alpha;
    s.dt_max = dt_max;
    s.guard = guard;
    return s;
  }
  void fill(std::map<std::string, std::string>& m) const {
    m["kappa"] = num(kappa);
    m["alpha"] = num(alpha);
    m["dt_max"] = num(dt_max);
    m["guard"] = num(guard);
  }
};

void add_sle_scan(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("sle-scan", "Second moment of the SLE winding against T");
  struct P {
    SdeOptions sde;
    std::vector<double> T{10, 20, 40};
    std::int64_t paths = 100000;
  };
  auto p = std::make_shared<P>();
  p->sde.add(sub);
  sub->add_option("--T", p->T, "Increasing horizons")->delimiter(',');
  sub->add_option("--paths", p->paths, "Number of paths");
  Command c{sub, nullptr, nullptr, "sle-scan.csv", ""};
  c.params = [p] {
    std::map<std::string, std::string> m{{"T", join(p->T)}, {"paths", std::to_string(p->paths)}};
    p->sde.fill(m);
    return m;
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = sle_csv_header();
    for (const auto& r : second_moment_scan(p->sde.params(), p->T, p->paths, g.seed, g.threads)) {
      out.rows.push_back(to_csv(r));
      out.summary.push_back("T " + num(r.T) + ": m2/T " + num(r.m2_over_T) + " +- " + num(r.stderr_));
    }
  };
  cmds.push_back(c);
}

void add_sle_tails(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("sle-tails", "Tail of the winding correction and trace-level Koebe checks");
  struct P {
    SdeOptions sde;
    double T = 5;
    std::int64_t paths = 10000;
    std::vector<double> s{0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    std::int64_t trace_paths = 0;
    double trace_T = 6;
    double trace_dt = 1e-3;
    std::int64_t trace_points = 400;
    std::vector<double> eps{0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
    double slack = 1.1;
  };
  auto p = std::make_shared<P>();
  p->sde.add(sub);
  sub->add_option("--T", p->T, "Horizon");
  sub->add_option("--paths", p->paths, "Number of paths");
  sub->add_option("--s", p->s, "Tail thresholds")->delimiter(',');
  sub->add_option("--trace-paths", p->trace_paths, "Paths traced for the Koebe checks (0 skips)");
  sub->add_option("--trace-T", p->trace_T, "Horizon of traced paths");
  sub->add_option("--trace-dt", p->trace_dt, "Largest step of traced paths");
  sub->add_option("--trace-points", p->trace_points, "Trace points per path");
  sub->add_option("--eps", p->eps, "Hitting radii of the Koebe check")->delimiter(',');
  sub->add_option("--slack", p->slack, "Multiplicative slack of the Koebe check");
  Command c{sub, nullptr, nullptr, "sle-tails.csv", "sle-tails.json"};
  c.params = [p] {
    std::map<std::string, std::string> m{{"T", num(p->T)},
                                         {"paths", std::to_string(p->paths)},
                                         {"s", join(p->s)},
                                         {"trace_paths", std::to_string(p->trace_paths)},
                                         {"trace_T", num(p->trace_T)},
                                         {"trace_dt", num(p->trace_dt)},
                                         {"trace_points", std::to_string(p->trace_points)},
                                         {"eps", join(p->eps)},
                                         {"slack", num(p->slack)}};
    p->sde.fill(m);
    return m;
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = "s,hits,n,freq";
    for (const auto& r : tail_check(p->sde.params(), p->T, p->paths, p->s, g.seed, g.threads)) {
      out.rows.push_back(num(r.s) + ',' + std::to_string(r.hits) + ',' + std::to_string(r.n) + ',' + num(r.freq));
    }
    if (p->trace_paths > 0) {
      SdeParams tp = p->sde.params();
      tp.dt_max = p->trace_dt;
      const auto checks = parallel_map(std::size_t(p->trace_paths), g.threads, [&](std::size_t i) {
        const auto traj = integrate_two_sided_radial(tp, p->trace_T, derive_seed(derive_seed(g.seed, 1), i));
        return koebe_check(solve_loewner_trace(traj, std::size_t(p->trace_points)), p->eps, p->slack);
      });
      KoebeCheck total;
      total.worst_ratio = 1.0;
      for (const auto& k : checks) {
        total.checks += k.checks;
        total.violations += k.violations;
        total.worst_ratio = std::max(total.worst_ratio, k.worst_ratio);
      }
      out.json["koebe"] = {{"paths", p->trace_paths},
                           {"checks", total.checks},
                           {"violations", total.violations},
                           {"worst_ratio", total.worst_ratio}};
      out.summary.push_back("koebe: " + std::to_string(total.violations) + " violations in " +
                            std::to_string(total.checks) + " checks");
    }
  };
  cmds.push_back(c);
}

std::vector<std::array<double, 4>> parse_quads(const std::string& text) {
  std::vector<std::array<double, 4>> quads;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    if (item.empty()) continue;
    std::array<double, 4> q{};
    std::stringstream one(item);
    std::string v;
    int k = 0;
    while (std::getline(one, v, ',')) {
      require(k < 4, ErrorKind::InvalidParameter, "quadruple needs four radii");
      q[std::size_t(k++)] = std::stod(v);
    }
    require(k == 4, ErrorKind::InvalidParameter, "quadruple needs four radii");
    quads.push_back(q);
  }
  return quads;
}

void add_arm_prob(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("arm-prob", "Arm-event probabilities and quasi-multiplicativity ratios");
  struct P {
    std::string sigma = "BY";
    double r = 4;
    double R = 16;
    int R_lat = 64;
    std::int64_t trials = 100000;
    std::string quads;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--sigma", p->sigma, "Color sequence, e.g. B, BY, BYBY, YY");
  sub->add_option("--r", p->r, "Inner radius, lattice units");
  sub->add_option("--R", p->R, "Outer radius, lattice units");
  sub->add_option("--R-lat", p->R_lat, "Disc radius, lattice units");
  sub->add_option("--trials", p->trials, "Configurations sampled");
  sub->add_option("--quads", p->quads, "Quasi-multiplicativity radii r1,r2,r3,r4;... (replaces r, R)");
  Command c{sub, nullptr, nullptr, "arm-prob.csv", ""};
  c.params = [p] {
    return std::map<std::string, std::string>{{"sigma", p->sigma},     {"r", num(p->r)},
                                              {"R", num(p->R)},         {"R_lat", std::to_string(p->R_lat)},
                                              {"trials", std::to_string(p->trials)}, {"quads", p->quads}};
  };
  c.run = [p, &g](Outputs& out) {
    if (p->quads.empty()) {
      out.csv_header = arm_csv_header();
      const auto row = estimate_arm_probability(ColorSequence::parse(p->sigma), p->r, p->R, p->R_lat,
                                                p->trials, g.seed, g.threads);
      out.rows.push_back(to_csv(row));
      out.summary.push_back("p_hat " + num(row.p_hat) + " +- " + num(row.ci_halfwidth));
      return;
    }
    out.csv_header = quasi_csv_header();
    for (const auto& q : parse_quads(p->quads)) {
      const auto row = quasi_multiplicativity(p->sigma, q[0], q[1], q[2], q[3], p->R_lat, p->trials,
                                              g.seed, g.threads);
      out.rows.push_back(to_csv(row));
      out.summary.push_back("ratio " + num(row.ratio) + " +- " + num(row.ratio_se));
    }
  };
  cmds.push_back(c);
}

void add_oracle_verify(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("oracle-verify", "Exhaustive and random cross-checks of the arm detectors");
  struct P {
    int max_sites = 20;
    std::int64_t random = 100000;
    int random_R_lat = 16;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--max-sites", p->max_sites, "Largest annulus enumerated exhaustively (<= 24)");
  sub->add_option("--random", p->random, "Random configurations for the loop check");
  sub->add_option("--random-R-lat", p->random_R_lat, "Disc radius of the random check");
  Command c{sub, nullptr, nullptr, "oracle-verify.csv", ""};
  c.params = [p] {
    return std::map<std::string, std::string>{{"max_sites", std::to_string(p->max_sites)},
                                              {"random", std::to_string(p->random)},
                                              {"random_R_lat", std::to_string(p->random_R_lat)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = oracle_csv_header();
    std::int64_t total = 0, configs = 0;
    for (const auto& r : oracle_verify(p->max_sites, p->random, p->random_R_lat, g.seed, g.threads)) {
      out.rows.push_back(to_csv(r));
      total += r.mismatches;
      configs += r.configs;
    }
    out.summary.push_back(std::to_string(total) + " mismatches (" + std::to_string(configs) + " configurations)");
  };
  cmds.push_back(c);
}

void add_decorrelation(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("decorrelation", "TV distance between near and far arm conditionings");
  struct P {
    int k = 2;
    double r = 2;
    std::vector<double> rprimes{2, 4, 8};
    int R = 32;
    std::string functional = "crossings";
    std::int64_t samples = 2000;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--k", p->k, "Number of arms: 1, 2 or 4");
  sub->add_option("--r", p->r, "Inner radius of the far conditioning");
  sub->add_option("--rprimes", p->rprimes, "Radii beyond which the functional looks")->delimiter(',');
  sub->add_option("--R", p->R, "Disc radius, lattice units");
  sub->add_option("--functional", p->functional, "crossings | arms | winding");
  sub->add_option("--samples", p->samples, "Samples per conditioning");
  Command c{sub, nullptr, nullptr, "decorrelation.csv", ""};
  c.params = [p] {
    return std::map<std::string, std::string>{{"k", std::to_string(p->k)},  {"r", num(p->r)},
                                              {"rprimes", join(p->rprimes)}, {"R", std::to_string(p->R)},
                                              {"functional", p->functional}, {"samples", std::to_string(p->samples)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = decorrelation_csv_header();
    for (const auto& r : decorrelation_experiment(p->k, p->r, p->rprimes, p->R, parse_functional(p->functional),
                                                  p->samples, g.seed, g.budget, g.threads)) {
      out.rows.push_back(to_csv(r));
    }
  };
  cmds.push_back(c);
}

void add_faces_rate(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("faces-rate", "Frequency of good faces on A(R_lat/2, R_lat)");
  struct P {
    std::vector<int> radii{16, 32, 64, 128};
    std::int64_t trials = 10000;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--radii", p->radii, "Disc radii, lattice units")->delimiter(',');
  sub->add_option("--trials", p->trials, "Configurations per radius");
  Command c{sub, nullptr, nullptr, "faces-rate.csv", ""};
  c.params = [p] {
    return std::map<std::string, std::string>{{"radii", join(p->radii)}, {"trials", std::to_string(p->trials)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = faces_csv_header();
    for (int R : p->radii) {
      const auto row = faces_rate(R, p->trials, derive_seed(g.seed, std::uint64_t(R)), g.threads);
      out.rows.push_back(to_csv(row));
      out.summary.push_back("R_lat " + std::to_string(R) + ": rate " + num(row.rate));
    }
  };
  cmds.push_back(c);
}

void add_decomposition(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("decomposition", "Variance against the sum of per-annulus second moments");
  struct P {
    int R_lat = 256;
    double epsilon = 0.25;
    std::int64_t samples = 2000;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--R-lat", p->R_lat, "Disc radius, lattice units");
  sub->add_option("--epsilon", p->epsilon, "Radius ratio of consecutive annuli");
  sub->add_option("--samples", p->samples, "Accepted paths");
  Command c{sub, nullptr, nullptr, "decomposition.csv", "decomposition.json"};
  c.params = [p] {
    return std::map<std::string, std::string>{{"R_lat", std::to_string(p->R_lat)},
                                              {"epsilon", num(p->epsilon)},
                                              {"samples", std::to_string(p->samples)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = "j,radius,m2,m2_se";
    const auto rep = annulus_decomposition_check(p->R_lat, p->epsilon, p->samples, g.seed, g.budget, g.threads);
    for (std::size_t j = 0; j < rep.segment_m2.size(); ++j) {
      out.rows.push_back(std::to_string(j) + ',' + num(rep.radii[j]) + ',' + num(rep.segment_m2[j]) + ',' +
                         num(rep.segment_m2_se[j]));
    }
    out.json["variance"] = rep.variance;
    out.json["sum_m2"] = rep.sum_m2;
    out.json["difference"] = rep.difference;
    out.json["bound_scale"] = rep.bound_scale;
    out.json["n"] = rep.n;
    out.summary.push_back("variance " + num(rep.variance) + ", sum of segments " + num(rep.sum_m2));
  };
  cmds.push_back(c);
}

void add_segment_moments(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("segment-moments", "Moments of the winding between T_{R,r} and tau_r");
  struct P {
    int R_lat = 128;
    double r = 8;
    double R = 32;
    std::int64_t samples = 2000;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--R-lat", p->R_lat, "Disc radius, lattice units");
  sub->add_option("--r", p->r, "Inner radius");
  sub->add_option("--R", p->R, "Outer radius");
  sub->add_option("--samples", p->samples, "Accepted paths");
  Command c{sub, nullptr, nullptr, "segment-moments.csv", ""};
  c.params = [p] {
    return std::map<std::string, std::string>{{"R_lat", std::to_string(p->R_lat)},
                                              {"r", num(p->r)},
                                              {"R", num(p->R)},
                                              {"samples", std::to_string(p->samples)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = "R_lat,r,R,n,abs_mean,m2,m2_se,m4,outer_m2,outer_m2_se";
    const auto m = segment_moment_check(p->R_lat, p->r, p->R, p->samples, g.seed, g.budget, g.threads);
    out.rows.push_back(std::to_string(m.R_lat) + ',' + num(m.r) + ',' + num(m.R) + ',' + std::to_string(m.n) +
                       ',' + num(m.abs_mean) + ',' + num(m.m2) + ',' + num(m.m2_se) + ',' + num(m.m4) + ',' +
                       num(m.outer_m2) + ',' + num(m.outer_m2_se));
  };
  cmds.push_back(c);
}

void add_crossings_tail(CLI::App& app, const Globals& g, std::vector<Command>& cmds) {
  auto* sub = app.add_subcommand("crossings-tail", "Tail of the number of disjoint blue sector crossings");
  struct P {
    int R_lat = 64;
    double r = 2;
    double R = 60;
    std::vector<double> K{0.5, 1, 1.5, 2, 2.5};
    std::int64_t trials = 10000;
  };
  auto p = std::make_shared<P>();
  sub->add_option("--R-lat", p->R_lat, "Disc radius, lattice units");
  sub->add_option("--r", p->r, "Inner radius");
  sub->add_option("--R", p->R, "Outer radius");
  sub->add_option("--K", p->K, "Multipliers of log(R/r)")->delimiter(',');
  sub->add_option("--trials", p->trials, "Configurations sampled");
  Command c{sub, nullptr, nullptr, "crossings-tail.csv", "crossings-tail.json"};
  c.params = [p] {
    return std::map<std::string, std::string>{{"R_lat", std::to_string(p->R_lat)}, {"r", num(p->r)},
                                              {"R", num(p->R)}, {"K", join(p->K)},
                                              {"trials", std::to_string(p->trials)}};
  };
  c.run = [p, &g](Outputs& out) {
    out.csv_header = "K,threshold,hits,n,freq";
    const auto rep = crossings_tail(p->R_lat, p->r, p->R, p->K, p->trials, g.seed, g.threads);
    for (const auto& r : rep.rows) {
      out.rows.push_back(num(r.K) + ',' + std::to_string(r.threshold) + ',' + std::to_string(r.hits) + ',' +
                         std::to_string(r.n) + ',' + num(r.freq));
    }
    out.json["slope"] = rep.fit.slope;
    out.json["slope_stderr"] = rep.fit.slope_stderr;
    out.json["negative_at_95"] = rep.fit.slope + 1.959963984540054 * rep.fit.slope_stderr < 0;
    out.summary.push_back("log-frequency slope " + num(rep.fit.slope) + " +- " + num(rep.fit.slope_stderr));
  };
  cmds.push_back(c);
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::BudgetExceeded:
      return kBudget;
    case ErrorKind::IntegrationFailure:
      return kNumeric;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Winding numbers and arm events of critical percolation and two-sided radial SLE"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* threads_opt = app.add_option("--threads", g.threads, "Worker threads (default: $ARMWIND_THREADS or 1)");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--budget", g.budget, "Rejection attempts allowed per sample");
  app.add_option("--config", g.config, "Flat key=value file mirroring the flags; flags win");

  std::vector<Command> cmds;
  add_winding_scan(app, g, cmds);
  add_two_arm_scan(app, g, cmds);
  add_sle_scan(app, g, cmds);
  add_sle_tails(app, g, cmds);
  add_arm_prob(app, g, cmds);
  add_oracle_verify(app, g, cmds);
  add_decorrelation(app, g, cmds);
  add_faces_rate(app, g, cmds);
  add_decomposition(app, g, cmds);
  add_segment_moments(app, g, cmds);
  add_crossings_tail(app, g, cmds);

  const Command* cmd = nullptr;
  try {
    app.parse(argc, argv);
    for (const auto& c : cmds) {
      if (c.app->parsed()) cmd = &c;
    }
    if (!g.config.empty()) apply_config(g.config, app, *cmd->app);
    if (threads_opt->count() == 0) {
      if (const char* env = std::getenv("ARMWIND_THREADS")) {
        try {
          g.threads = std::stoi(env);
        } catch (const std::exception&) {
          throw CLI::ValidationError("ARMWIND_THREADS", "not an integer");
        }
      }
    }
    if (g.threads < 1) throw CLI::ValidationError("--threads", "must be at least 1");
    if (g.budget < 1) throw CLI::ValidationError("--budget", "must be at least 1");
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  ExperimentManifest manifest;
  manifest.command = cmd->app->get_name();
  manifest.params = cmd->params();
  manifest.params["budget"] = std::to_string(g.budget);
  manifest.seed = g.seed;
  manifest.threads = g.threads;
  manifest.outputs.push_back(cmd->csv_name);
  if (!cmd->json_name.empty()) manifest.outputs.push_back(cmd->json_name);
  const std::string hash = manifest.hash();

  Outputs out;
  int code = kOk;
  std::string status = "ok";
  try {
    cmd->run(out);
  } catch (const Error& e) {
    code = exit_code(e.kind());
    status = std::string(code == kUsage ? "error: " : "partial: ") + e.what();
    std::cerr << "armwind: " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = kUsage;
    status = std::string("error: ") + e.what();
    std::cerr << "armwind: " << e.what() << "\n";
  }
  if (code == kUsage && out.rows.empty()) return code;

  try {
    const std::filesystem::path dir(g.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / cmd->csv_name, csv_text(out, hash, status));
    if (!cmd->json_name.empty()) {
      Json j;
      j["manifest_hash"] = hash;
      j["status"] = status;
      for (auto& [k, v] : out.json.items()) j[k] = v;
      write_file(dir / cmd->json_name, j.dump(2) + "\n");
    }
    write_file(dir / (manifest.command + ".manifest.json"), manifest.to_json() + "\n");
  } catch (const std::exception& e) {
    std::cerr << "armwind: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << manifest.command << " " << hash << "\n";
  for (const auto& line : out.summary) std::cout << line << "\n";
  return code;
}
