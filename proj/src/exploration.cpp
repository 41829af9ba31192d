#include "armwind/exploration.hpp"

#include <iomanip>
#include <ostream>

#include "armwind/walker.hpp"

namespace armwind {

ExplorationPath trace_exploration(const Configuration& config, const EVertexPair& ends,
                                  const BoundaryColoring& boundary, StopRule stop) {
  require(!(ends.a.v == ends.b.v), ErrorKind::InvalidParameter, "exploration needs a != b");
  const DiscreteDomain& d = config.domain();
  const auto bedges = d.boundary_edges();
  require(ends.a.edge < bedges.size() && d.head(bedges[ends.a.edge]) == ends.a.v &&
              ends.b.edge < bedges.size() && d.head(bedges[ends.b.edge]) == ends.b.v,
          ErrorKind::InvalidParameter, "endpoints are not e-vertices of the domain");

  const ColorView colors(config, boundary);
  auto is_blue = [&](int idx) { return colors.is_blue(idx); };
  const double stop_r9 = stop.radius > 0 ? 9.0 * stop.radius * stop.radius : -1.0;
  auto should_stop = [&](Vertex v) -> std::optional<StopReason> {
    if (v == ends.b.v) return StopReason::ReachedEnd;
    if (stop.at_origin_hexagon && v.norm9() == 3) return StopReason::OriginHexagon;
    if (stop_r9 >= 0 && static_cast<double>(v.norm9()) <= stop_r9) return StopReason::Radius;
    return std::nullopt;
  };

  ExplorationPath path;
  path.domain = config.domain_ptr();
  path.ends = ends;
  path.vertices.push_back(ends.a.v);
  path.cum_winding.push_back(0.0);

  // Virtual edge arriving at a: the next outside hexagon (right arc, blue) on
  // the right and the previous one (left arc, yellow) on the left.
  const DirectedEdge into_a = bedges[ends.a.edge];
  DirectedEdge e{third_hexagon(d, into_a), rotate_dir(into_a.dir, 2)};
  if (auto r = should_stop(ends.a.v); r && *r != StopReason::ReachedEnd) {
    path.stop = *r;
    return path;
  }
  const std::size_t cap = 3 * d.grid_size() + 16;
  while (true) {
    e = step(d, e, is_blue);
    const Vertex v = d.head(e);
    path.cum_winding.push_back(path.cum_winding.back() + winding_increment(path.vertices.back(), v));
    path.edges.push_back(e);
    path.vertices.push_back(v);
    if (auto r = should_stop(v)) {
      path.stop = *r;
      return path;
    }
    require(path.edges.size() < cap, ErrorKind::DegenerateDomain, "exploration did not terminate");
  }
}

ExplorationPath trace_exploration(const Configuration& config, const EVertexPair& ends,
                                  StopRule stop) {
  return trace_exploration(config, ends, split_boundary(config.domain(), ends), stop);
}

double winding(const ExplorationPath& path, std::size_t start, std::size_t end) {
  require(start <= end && end < path.size(), ErrorKind::InvalidParameter,
          "winding range out of bounds");
  return path.cum_winding[end] - path.cum_winding[start];
}

std::optional<std::size_t> origin_hit(const ExplorationPath& path) {
  for (std::size_t k = 0; k < path.vertices.size(); ++k) {
    if (path.vertices[k].norm9() == 3) return k;
  }
  return std::nullopt;
}

bool detect_event_A(const ExplorationPath& path) { return origin_hit(path).has_value(); }

std::optional<std::size_t> first_hit(const ExplorationPath& path, double r) {
  const double r9 = 9.0 * r * r;
  for (std::size_t k = 0; k < path.vertices.size(); ++k) {
    if (static_cast<double>(path.vertices[k].norm9()) <= r9) return k;
  }
  return std::nullopt;
}

namespace {

bool vertex_on_domain_boundary(const ExplorationPath& path, std::size_t k) {
  if (k == 0) return true;
  const DiscreteDomain& d = *path.domain;
  const DirectedEdge e = path.edges[k - 1];
  return !d.contains(e.site) || !d.contains(d.neighbor(e.site, e.dir)) ||
         !d.contains(third_hexagon(d, e));
}

}  // namespace

std::optional<std::size_t> last_exit(const ExplorationPath& path, double R, std::size_t before) {
  const double R9 = 9.0 * R * R;
  const std::size_t n = std::min(before, path.size());
  for (std::size_t k = n; k-- > 0;) {
    if (static_cast<double>(path.vertices[k].norm9()) >= R9 || vertex_on_domain_boundary(path, k)) {
      return k;
    }
  }
  return std::nullopt;
}

HitTimes hit_times(const ExplorationPath& path, std::span<const double> radii) {
  HitTimes h;
  h.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    require(r > 0, ErrorKind::InvalidParameter, "hit radii must be positive");
    h.tau.push_back(first_hit(path, r));
  }
  h.last_before.assign(radii.size(), std::vector<std::optional<std::size_t>>(radii.size()));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    for (std::size_t j = 0; j < radii.size(); ++j) {
      if (radii[i] > radii[j] && h.tau[j]) h.last_before[i][j] = last_exit(path, radii[i], *h.tau[j]);
    }
  }
  return h;
}

void write_path_csv(std::ostream& out, const ExplorationPath& path) {
  const double eta = path.domain->mesh();
  out << "index,x,y,cum_winding\n" << std::setprecision(17);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const Point z = path.vertices[k].position() * eta;
    out << k << ',' << z.real() << ',' << z.imag() << ',' << path.cum_winding[k] << '\n';
  }
}

}  // namespace armwind
