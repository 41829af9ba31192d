#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "armwind/lattice.hpp"

namespace armwind {

enum class StopReason { ReachedEnd, OriginHexagon, Radius };

/// When to stop the walk besides arriving at the far e-vertex.
struct StopRule {
  bool at_origin_hexagon = false;
  /// Stop at the first vertex with |v| <= radius (lattice units); ignored if <= 0.
  double radius = 0.0;
};

/// Exploration path from e-vertex a toward e-vertex b. `edges[k]` runs from
/// `vertices[k]` to `vertices[k+1]` with a blue hexagon on its right.
struct ExplorationPath {
  DomainPtr domain;
  EVertexPair ends;
  std::vector<Vertex> vertices;
  std::vector<DirectedEdge> edges;
  std::vector<double> cum_winding;
  StopReason stop = StopReason::ReachedEnd;

  std::size_t size() const { return vertices.size(); }
};

/// Walk the interface with the right s-boundary painted blue and the left one
/// yellow. `boundary` must be split_boundary(domain, ends).
ExplorationPath trace_exploration(const Configuration& config, const EVertexPair& ends,
                                  const BoundaryColoring& boundary, StopRule stop = {});
ExplorationPath trace_exploration(const Configuration& config, const EVertexPair& ends,
                                  StopRule stop = {});

/// Accumulated winding around the origin between two path indices.
double winding(const ExplorationPath& path, std::size_t start, std::size_t end);

/// True iff the full path touches a corner of the origin hexagon.
bool detect_event_A(const ExplorationPath& path);

/// Index of the first vertex on the origin hexagon.
std::optional<std::size_t> origin_hit(const ExplorationPath& path);

/// First index with |v| <= r (lattice units).
std::optional<std::size_t> first_hit(const ExplorationPath& path, double r);

/// Last index before `before` whose vertex has |v| >= R or lies on the
/// domain boundary (a corner shared with a hexagon outside the domain).
std::optional<std::size_t> last_exit(const ExplorationPath& path, double R, std::size_t before);

struct HitTimes {
  std::vector<double> radii;
  std::vector<std::optional<std::size_t>> tau;
  /// last_before[i][j] = last exit from radius radii[i] before tau[j]; set only
  /// when radii[i] > radii[j] and tau[j] exists.
  std::vector<std::vector<std::optional<std::size_t>>> last_before;
};

HitTimes hit_times(const ExplorationPath& path, std::span<const double> radii);

/// "index,x,y,cum_winding" with coordinates in continuum units.
void write_path_csv(std::ostream& out, const ExplorationPath& path);

}  // namespace armwind
