#pragma once

// The interface walker shared by exploration paths, loop extraction and arm
// counting. A state is a directed hexagonal edge with a blue hexagon on its
// right; one step looks at the third hexagon of the triangle at the head.

#include <cmath>

#include "armwind/lattice.hpp"

namespace armwind {

/// Hexagon meeting the head of `e` that is not adjacent to `e`.
inline int third_hexagon(const DiscreteDomain& d, DirectedEdge e) {
  return d.neighbor(e.site, rotate_dir(e.dir, -1));
}

/// Advance one edge, keeping blue on the right and yellow on the left.
template <class IsBlue>
inline DirectedEdge step(const DiscreteDomain& d, DirectedEdge e, const IsBlue& is_blue) {
  const int x = third_hexagon(d, e);
  if (is_blue(x)) return {x, rotate_dir(e.dir, 1)};
  return {e.site, rotate_dir(e.dir, -1)};
}

/// The same edge traversed the other way (colors swap sides).
inline DirectedEdge reversed(const DiscreteDomain& d, DirectedEdge e) {
  return {d.neighbor(e.site, e.dir), rotate_dir(e.dir, 3)};
}

/// Principal-value angle of to/from in (-pi, pi], computed from exact
/// integer cross and dot products.
inline double winding_increment(Vertex from, Vertex to) {
  const double cross = static_cast<double>(std::int64_t(from.p) * to.q - std::int64_t(from.q) * to.p);
  const double dot2 = static_cast<double>(2 * std::int64_t(from.p) * to.p +
                                          std::int64_t(from.p) * to.q + std::int64_t(from.q) * to.p +
                                          2 * std::int64_t(from.q) * to.q);
  constexpr double kSqrt3 = 1.73205080756887729353;
  return std::atan2(kSqrt3 * cross, dot2);
}

/// Corners of the origin hexagon are the only vertices with 9|v|^2 = 3.
inline bool on_origin_hexagon(Vertex v) { return v.norm9() == 3; }

}  // namespace armwind
