#include "armwind/arms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>
#include <sstream>

#include "armwind/maxflow.hpp"
#include "armwind/parallel.hpp"
#include "armwind/rng.hpp"
#include "armwind/stats.hpp"
#include "armwind/walker.hpp"

namespace armwind {

ColorSequence::ColorSequence(std::vector<Color> colors) : colors_(std::move(colors)) {
  require(!colors_.empty(), ErrorKind::UnsupportedSequence, "empty color sequence");
  require(monochromatic() || alternating(), ErrorKind::UnsupportedSequence,
          "unsupported color sequence " + str());
}

ColorSequence ColorSequence::parse(std::string_view text) {
  std::vector<Color> c;
  for (char ch : text) {
    const char u = char(std::toupper(static_cast<unsigned char>(ch)));
    if (u == 'B') c.push_back(Color::Blue);
    else if (u == 'Y') c.push_back(Color::Yellow);
    else if (u != ',' && u != ' ') {
      throw Error(ErrorKind::UnsupportedSequence, "bad color letter in '" + std::string(text) + "'");
    }
  }
  return ColorSequence(std::move(c));
}

bool ColorSequence::monochromatic() const {
  return std::all_of(colors_.begin(), colors_.end(), [&](Color c) { return c == colors_[0]; });
}

bool ColorSequence::alternating() const {
  if (colors_.size() != 2 && colors_.size() != 4) return false;
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    if (colors_[i] == colors_[(i + 1) % colors_.size()]) return false;
  }
  return true;
}

std::string ColorSequence::str() const {
  std::string s;
  for (Color c : colors_) s += c == Color::Blue ? 'B' : 'Y';
  return s;
}

std::vector<Strand> interface_strands(const Configuration& config, const Annulus& annulus) {
  const DiscreteDomain& d = config.domain();
  auto is_blue = [&](int idx) { return config.is_blue(idx); };
  std::vector<Strand> out;
  for (int b : annulus.sites()) {
    if (!config.is_blue(b)) continue;
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(b, k);
      if (!annulus.contains(y) || config.is_blue(y)) continue;
      const int behind = d.neighbor(b, rotate_dir(k, 1));
      if (annulus.contains(behind)) continue;
      Strand s;
      s.starts_inner = annulus.in_hole(behind);
      DirectedEdge e{b, k};
      s.vertices.push_back(d.tail(e));
      while (true) {
        s.edges.push_back(e);
        s.vertices.push_back(d.head(e));
        const int x = third_hexagon(d, e);
        if (!annulus.contains(x)) {
          s.ends_inner = annulus.in_hole(x);
          break;
        }
        e = step(d, e, is_blue);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

int count_interface_crossings(const Configuration& config, const Annulus& annulus) {
  const DiscreteDomain& d = config.domain();
  auto is_blue = [&](int idx) { return config.is_blue(idx); };
  int n = 0;
  for (int b : annulus.sites()) {
    if (!config.is_blue(b)) continue;
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(b, k);
      if (!annulus.contains(y) || config.is_blue(y)) continue;
      const int behind = d.neighbor(b, rotate_dir(k, 1));
      if (annulus.contains(behind)) continue;
      const bool from_inner = annulus.in_hole(behind);
      DirectedEdge e{b, k};
      while (annulus.contains(third_hexagon(d, e))) e = step(d, e, is_blue);
      n += from_inner != annulus.in_hole(third_hexagon(d, e));
    }
  }
  return n;
}

bool has_crossing(const Configuration& config, const Annulus& annulus, Color color) {
  const DiscreteDomain& d = config.domain();
  const bool want = color == Color::Blue;
  std::vector<std::uint8_t> seen(d.grid_size(), 0);
  std::vector<int> stack;
  for (int s : annulus.sites()) {
    if (annulus.touches_inner(s) && config.is_blue(s) == want) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (annulus.touches_outer(x)) return true;
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(x, k);
      if (seen[y] || !annulus.contains(y) || config.is_blue(y) != want) continue;
      seen[y] = 1;
      stack.push_back(y);
    }
  }
  return false;
}

namespace {

// Vertex-disjoint paths from `sources` to `sinks` through `allowed` sites.
int disjoint_paths(const DiscreteDomain& d, std::span<const int> sites,
                   const std::function<bool(int)>& allowed, const std::function<bool(int)>& source,
                   const std::function<bool(int)>& sink, int limit) {
  std::vector<int> node(d.grid_size(), -1);
  int count = 0;
  for (int s : sites) {
    if (allowed(s)) node[s] = count++;
  }
  MaxFlow flow(2 * count + 2);
  const int src = 2 * count, dst = 2 * count + 1;
  for (int s : sites) {
    const int v = node[s];
    if (v < 0) continue;
    flow.add_edge(2 * v, 2 * v + 1, 1);
    if (source(s)) flow.add_edge(src, 2 * v, 1);
    if (sink(s)) flow.add_edge(2 * v + 1, dst, 1);
    for (int k = 0; k < 6; ++k) {
      const int w = node[d.neighbor(s, k)];
      if (w >= 0) flow.add_edge(2 * v + 1, 2 * w, 1);
    }
  }
  return flow.run(src, dst, limit);
}

}  // namespace

int max_monochromatic_crossings(const Configuration& config, const Annulus& annulus, Color color,
                                int limit) {
  const bool want = color == Color::Blue;
  return disjoint_paths(
      config.domain(), annulus.sites(),
      [&](int s) { return annulus.contains(s) && config.is_blue(s) == want; },
      [&](int s) { return annulus.touches_inner(s); },
      [&](int s) { return annulus.touches_outer(s); }, limit);
}

bool detect_arms(const Configuration& config, const Annulus& annulus, const ColorSequence& sigma) {
  if (sigma.monochromatic()) {
    if (sigma.size() == 1) return has_crossing(config, annulus, sigma.colors()[0]);
    return max_monochromatic_crossings(config, annulus, sigma.colors()[0], int(sigma.size())) >=
           int(sigma.size());
  }
  require(sigma.alternating(), ErrorKind::UnsupportedSequence, "unsupported color sequence");
  return count_interface_crossings(config, annulus) >= int(sigma.size());
}

namespace {

struct CrossingPath {
  std::uint32_t mask;
  bool blue;
  double angle;
};

std::vector<CrossingPath> minimal_crossings(const Configuration& config, const Annulus& annulus) {
  const DiscreteDomain& d = config.domain();
  const auto sites = annulus.sites();
  std::vector<int> local(d.grid_size(), -1);
  for (std::size_t i = 0; i < sites.size(); ++i) local[sites[i]] = int(i);
  std::vector<CrossingPath> out;
  std::vector<std::uint32_t> seen_masks;

  std::function<void(int, std::uint32_t, bool, double)> extend = [&](int x, std::uint32_t mask,
                                                                      bool blue, double angle) {
    if (annulus.touches_outer(x)) {
      out.push_back({mask, blue, angle});
      return;
    }
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(x, k);
      const int ly = local[y];
      if (ly < 0 || (mask >> ly & 1U) || config.is_blue(y) != blue || annulus.touches_inner(y)) continue;
      extend(y, mask | (1U << ly), blue, angle);
    }
  };
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const int s = sites[i];
    if (!annulus.touches_inner(s)) continue;
    extend(s, 1U << i, config.is_blue(s), std::arg(embed(d.coord(s))));
  }
  std::sort(out.begin(), out.end(), [](const CrossingPath& a, const CrossingPath& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return a.mask < b.mask;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CrossingPath& a, const CrossingPath& b) {
                          return a.mask == b.mask && a.angle == b.angle;
                        }),
            out.end());
  return out;
}

}  // namespace

int max_disjoint_crossings_oracle(const Configuration& config, const Annulus& annulus,
                                  OracleMode mode) {
  if (mode != OracleMode::Alternating) {
    require(annulus.sites().size() <= kMaxFlowOracleSites, ErrorKind::InstanceTooLarge,
            "annulus too large for the max-flow oracle");
    return max_monochromatic_crossings(config, annulus,
                                       mode == OracleMode::Blue ? Color::Blue : Color::Yellow);
  }
  require(annulus.sites().size() <= kAlternatingOracleSites, ErrorKind::InstanceTooLarge,
          "annulus too large for the exhaustive alternating oracle");
  const auto paths = minimal_crossings(config, annulus);
  int best = 0;
  // Paths in increasing start angle, colors alternating, pairwise disjoint.
  std::function<void(std::size_t, std::uint32_t, int, bool, bool)> search =
      [&](std::size_t from, std::uint32_t used, int count, bool first_blue, bool last_blue) {
        if (count >= 2 && count % 2 == 0 && first_blue != last_blue) best = std::max(best, count);
        for (std::size_t i = from; i < paths.size(); ++i) {
          const CrossingPath& p = paths[i];
          if (p.mask & used) continue;
          if (count > 0 && p.blue == last_blue) continue;
          search(i + 1, used | p.mask, count + 1, count == 0 ? p.blue : first_blue, p.blue);
        }
      };
  search(0, 0, 0, false, false);
  return best;
}

namespace {

std::vector<int> bfs_path(const DiscreteDomain& d, int from, int to,
                          const std::function<bool(int)>& allowed) {
  std::vector<int> parent(d.grid_size(), -2);
  std::deque<int> q{from};
  parent[from] = -1;
  while (!q.empty()) {
    const int x = q.front();
    q.pop_front();
    if (x == to) break;
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(x, k);
      if (parent[y] != -2 || !allowed(y)) continue;
      parent[y] = x;
      q.push_back(y);
    }
  }
  if (parent[to] == -2) return {};
  std::vector<int> path;
  for (int x = to; x != -1; x = parent[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

bool all_args(const Strand& s, const std::function<bool(double)>& pred) {
  return std::all_of(s.vertices.begin(), s.vertices.end(),
                     [&](const Vertex& v) { return pred(std::abs(std::arg(v.position()))); });
}

bool end_args(const Strand& s, const std::function<bool(double)>& pred) {
  return pred(std::abs(std::arg(s.vertices.front().position()))) &&
         pred(std::abs(std::arg(s.vertices.back().position())));
}

}  // namespace

std::optional<Faces> detect_good_faces(const Configuration& config, const Annulus& annulus) {
  constexpr double kPi = std::numbers::pi;
  const DiscreteDomain& d = config.domain();
  std::vector<Strand> crossing;
  for (Strand& s : interface_strands(config, annulus)) {
    if (s.crossing()) crossing.push_back(std::move(s));
  }
  if (crossing.size() != 2) return std::nullopt;

  auto right_cone = [&](const Strand& s) {
    return all_args(s, [&](double a) { return a < 3 * kPi / 4; }) &&
           end_args(s, [&](double a) { return a < kPi / 4; });
  };
  auto left_cone = [&](const Strand& s) {
    return all_args(s, [&](double a) { return a > kPi / 4; }) &&
           end_args(s, [&](double a) { return a > 3 * kPi / 4; });
  };
  const Strand* s1 = nullptr;
  const Strand* s2 = nullptr;
  if (right_cone(crossing[0]) && left_cone(crossing[1])) {
    s1 = &crossing[0];
    s2 = &crossing[1];
  } else if (right_cone(crossing[1]) && left_cone(crossing[0])) {
    s1 = &crossing[1];
    s2 = &crossing[0];
  } else {
    return std::nullopt;
  }

  auto inner_edge = [](const Strand& s) { return s.starts_inner ? s.edges.front() : s.edges.back(); };
  auto inner_vertex = [](const Strand& s) {
    return s.starts_inner ? s.vertices.front() : s.vertices.back();
  };
  const DirectedEdge e1 = inner_edge(*s1), e2 = inner_edge(*s2);

  Faces f;
  f.domain = config.domain_ptr();
  f.radius = annulus.inner_radius();
  f.x1 = inner_vertex(*s1);
  f.x2 = inner_vertex(*s2);
  f.quality = std::abs(f.x1.position() - f.x2.position()) / f.radius;
  f.blue_arc = bfs_path(d, e1.site, e2.site,
                        [&](int s) { return annulus.contains(s) && config.is_blue(s); });
  f.yellow_arc = bfs_path(d, d.neighbor(e2.site, e2.dir), d.neighbor(e1.site, e1.dir),
                          [&](int s) { return annulus.contains(s) && !config.is_blue(s); });
  if (f.blue_arc.empty() || f.yellow_arc.empty()) return std::nullopt;
  const Strand& inward = s1->ends_inner ? *s1 : *s2;
  const Strand& outward = s1->ends_inner ? *s2 : *s1;
  f.start_edge = inward.edges.back();
  f.finish = outward.vertices.front();

  // Interior: cells not reachable from the grid border without crossing the circuit.
  std::vector<std::uint8_t> mark(d.grid_size(), 0);  // 1 circuit, 2 outside
  for (int s : f.blue_arc) mark[s] = 1;
  for (int s : f.yellow_arc) mark[s] = 1;
  std::vector<int> stack;
  const int W = d.half_width();
  for (int idx = 0; idx < int(d.grid_size()); ++idx) {
    const SiteCoord c = d.coord(idx);
    if ((std::abs(c.i) == W || std::abs(c.j) == W) && !mark[idx]) {
      mark[idx] = 2;
      stack.push_back(idx);
    }
  }
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    const SiteCoord c = d.coord(x);
    for (int k = 0; k < 6; ++k) {
      const SiteCoord yc = c + kDirections[k];
      if (!d.in_grid(yc)) continue;
      const int y = d.index(yc);
      if (mark[y]) continue;
      mark[y] = 2;
      stack.push_back(y);
    }
  }
  f.interior.assign(d.word_count(), 0);
  for (int s : d.sites()) {
    if (mark[s] == 0) f.interior[s >> 6] |= std::uint64_t{1} << (s & 63);
  }
  return f;
}

namespace {

bool arm_to_disc(const Configuration& config, const Faces& faces, std::span<const int> arc,
                 bool blue, double r) {
  const DiscreteDomain& d = config.domain();
  auto in_hole = [&](int s) { return hexagon_max_abs(d.coord(s)) < r; };
  auto touches_hole = [&](int s) {
    for (int k = 0; k < 6; ++k) {
      if (d.contains(d.neighbor(s, k)) && in_hole(d.neighbor(s, k))) return true;
    }
    return false;
  };
  std::vector<std::uint8_t> seen(d.grid_size(), 0);
  std::vector<int> stack;
  for (int s : arc) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (touches_hole(x)) return true;
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(x, k);
      if (seen[y] || !faces.inside(y) || config.is_blue(y) != blue || in_hole(y)) continue;
      seen[y] = 1;
      stack.push_back(y);
    }
  }
  return false;
}

}  // namespace

bool detect_arms_to_faces(const Configuration& config, const Faces& faces, double r) {
  require(r > 0 && r <= faces.radius, ErrorKind::InvalidParameter, "faces arm radius out of range");
  return arm_to_disc(config, faces, faces.blue_arc, true, r) &&
         arm_to_disc(config, faces, faces.yellow_arc, false, r);
}

ExplorationPath trace_faces_interface(const Configuration& config, const Faces& faces) {
  const DiscreteDomain& d = config.domain();
  auto is_blue = [&](int idx) { return config.is_blue(idx); };
  ExplorationPath path;
  path.domain = config.domain_ptr();
  DirectedEdge e = faces.start_edge;
  path.vertices.push_back(d.head(e));
  path.cum_winding.push_back(0.0);
  path.stop = StopReason::ReachedEnd;
  const std::size_t cap = 3 * d.grid_size();
  while (!(path.vertices.back() == faces.finish)) {
    if (on_origin_hexagon(path.vertices.back())) {
      path.stop = StopReason::OriginHexagon;
      break;
    }
    e = step(d, e, is_blue);
    const Vertex v = d.head(e);
    path.cum_winding.push_back(path.cum_winding.back() + winding_increment(path.vertices.back(), v));
    path.edges.push_back(e);
    path.vertices.push_back(v);
    require(path.edges.size() < cap, ErrorKind::DegenerateGeometry, "faces interface did not close");
  }
  return path;
}

int max_sector_crossings(const Configuration& config, double r, double R, double half_angle,
                         Color color) {
  require(r >= 0 && r < R && half_angle > 0 && half_angle < std::numbers::pi,
          ErrorKind::InvalidParameter, "bad sector");
  const DiscreteDomain& d = config.domain();
  auto radial = [&](int s) {
    const double a = std::abs(embed(d.coord(s)));
    return a >= r && a <= R;
  };
  auto angle = [&](int s) { return std::arg(embed(d.coord(s))); };
  auto in_sector = [&](int s) {
    return d.contains(s) && radial(s) && std::abs(angle(s)) < half_angle;
  };
  auto side = [&](int s, bool upper) {
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(s, k);
      if (in_sector(y) || !radial(y)) continue;
      if (upper ? angle(y) >= half_angle : angle(y) <= -half_angle) return true;
    }
    return false;
  };
  std::vector<int> sites;
  for (int s : d.sites()) {
    if (in_sector(s)) sites.push_back(s);
  }
  const bool want = color == Color::Blue;
  return disjoint_paths(
      d, sites, [&](int s) { return config.is_blue(s) == want; },
      [&](int s) { return side(s, false); }, [&](int s) { return side(s, true); }, 1 << 30);
}

ArmProbabilityRow estimate_arm_probability(const ColorSequence& sigma, double r, double R,
                                           int R_lat, std::int64_t n_trials, std::uint64_t seed,
                                           int threads) {
  require(n_trials > 0, ErrorKind::InvalidParameter, "arm probability needs trials");
  require(r >= 0 && r <= R, ErrorKind::InvalidParameter, "arm probability needs r <= R");
  ArmProbabilityRow row;
  row.sigma = sigma.str();
  row.r = r;
  row.R = R;
  row.R_lat = R_lat;
  row.n_trials = n_trials;
  row.seed = seed;
  if (r == R) {
    // Degenerate annulus: probability one by convention.
    row.n_hits = n_trials;
  } else {
    const DomainPtr domain = build_disc_domain(R_lat);
    const Annulus annulus = annulus_sites(domain, r, R);
    const auto hits = parallel_map(std::size_t(n_trials), threads, [&](std::size_t t) {
      const Configuration c = sample_configuration(domain, derive_seed(seed, t));
      return std::uint8_t(detect_arms(c, annulus, sigma));
    });
    for (auto h : hits) row.n_hits += h;
  }
  row.p_hat = double(row.n_hits) / double(row.n_trials);
  const Interval ci = wilson_interval(row.n_hits, row.n_trials);
  row.ci_halfwidth = 0.5 * (ci.upper - ci.lower);
  return row;
}

std::string arm_csv_header() { return "sigma,r,R,R_lat,n_trials,n_hits,p_hat,ci_halfwidth,seed"; }

std::string to_csv(const ArmProbabilityRow& row) {
  std::ostringstream os;
  os.precision(10);
  os << row.sigma << ',' << row.r << ',' << row.R << ',' << row.R_lat << ',' << row.n_trials << ','
     << row.n_hits << ',' << row.p_hat << ',' << row.ci_halfwidth << ',' << row.seed;
  return os.str();
}

}  // namespace armwind
