#pragma once

// Reference implementations used only by tests. They share no walking or
// connectivity code with the library: geometry comes from floating-point
// hexagon corners and connectivity from plain flood fills.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "armwind/lattice.hpp"

namespace oracle {

using armwind::Configuration;
using armwind::DiscreteDomain;
using armwind::SiteCoord;
using armwind::Vertex;

inline constexpr double kSqrt3 = 1.7320508075688772;

/// Scaled axial coordinates of a plane point (exact for hexagon corners).
inline Vertex to_vertex(double x, double y) {
  const double q = 3.0 * 2.0 * y / kSqrt3;
  const double p = 3.0 * x - q / 2.0;
  return {int(std::lround(p)), int(std::lround(q))};
}

inline std::array<Vertex, 6> corners(SiteCoord s) {
  const double cx = s.i + 0.5 * s.j, cy = kSqrt3 / 2 * s.j;
  std::array<Vertex, 6> out;
  for (int k = 0; k < 6; ++k) {
    const double a = M_PI / 6 + k * M_PI / 3;
    out[k] = to_vertex(cx + std::cos(a) / kSqrt3, cy + std::sin(a) / kSqrt3);
  }
  return out;
}

/// Sites whose hexagon has corner v.
inline std::vector<SiteCoord> hexes_at(Vertex v) {
  std::vector<SiteCoord> out;
  const int ci = int(std::floor((v.p) / 3.0)), cj = int(std::floor((v.q) / 3.0));
  for (int i = ci - 2; i <= ci + 2; ++i) {
    for (int j = cj - 2; j <= cj + 2; ++j) {
      for (const Vertex& c : corners({i, j})) {
        if (c == v) out.push_back({i, j});
      }
    }
  }
  return out;
}

inline double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

/// Geometric turn-by-color exploration: at each vertex, leave along the unique
/// edge with a blue hexagon on its right and a yellow one on its left.
template <class ColorFn>
std::vector<Vertex> reference_walk(Vertex a, Vertex b, const ColorFn& blue, std::size_t cap) {
  std::vector<Vertex> out{a};
  std::set<std::pair<Vertex, Vertex>> used;
  Vertex v = a;
  while (!(v == b) && out.size() < cap) {
    const auto hs = hexes_at(v);
    std::optional<Vertex> next;
    for (std::size_t x = 0; x < hs.size(); ++x) {
      for (std::size_t y = x + 1; y < hs.size(); ++y) {
        // The other common corner of hexagons x and y.
        std::optional<Vertex> w;
        for (const Vertex& cx : corners(hs[x])) {
          for (const Vertex& cy : corners(hs[y])) {
            if (cx == cy && !(cx == v)) w = cx;
          }
        }
        if (!w) continue;
        const armwind::Point pv = v.position(), pw = w->position();
        const armwind::Point hx = armwind::embed(hs[x]);
        const double side = cross(pw.real() - pv.real(), pw.imag() - pv.imag(),
                                  hx.real() - pv.real(), hx.imag() - pv.imag());
        const SiteCoord right = side < 0 ? hs[x] : hs[y];
        const SiteCoord left = side < 0 ? hs[y] : hs[x];
        if (blue(right) && !blue(left) && !used.count({v, *w})) next = w;
      }
    }
    if (!next) break;
    used.insert({v, *next});
    v = *next;
    out.push_back(v);
  }
  return out;
}

/// Exploration event by connectivity: a site of the blue cluster of the right
/// boundary and a site of the yellow cluster of the left boundary in the
/// closed neighborhood of the origin.
template <class ColorFn>
bool two_arm_origin_event(const DiscreteDomain& d, const ColorFn& blue,
                          const std::vector<SiteCoord>& right_boundary,
                          const std::vector<SiteCoord>& left_boundary) {
  auto flood = [&](const std::vector<SiteCoord>& seeds, bool want) {
    std::vector<char> seen(d.grid_size(), 0);
    std::vector<SiteCoord> stack;
    for (const SiteCoord& s : seeds) {
      seen[d.index(s)] = 1;
      stack.push_back(s);
    }
    while (!stack.empty()) {
      const SiteCoord x = stack.back();
      stack.pop_back();
      for (const auto& dir : armwind::kDirections) {
        const SiteCoord y = x + dir;
        if (!d.contains(y) || seen[d.index(y)] || blue(y) != want) continue;
        seen[d.index(y)] = 1;
        stack.push_back(y);
      }
    }
    return seen;
  };
  const auto bcr = flood(right_boundary, true);
  const auto ycl = flood(left_boundary, false);
  const int o = d.index({0, 0});
  bool has_b = bcr[o], has_y = ycl[o];
  for (const auto& dir : armwind::kDirections) {
    has_b |= bcr[d.index(dir)] != 0;
    has_y |= ycl[d.index(dir)] != 0;
  }
  return has_b && has_y;
}

/// Colors of a configuration indexed by coordinates.
inline std::map<SiteCoord, bool> color_map(const Configuration& c) {
  std::map<SiteCoord, bool> m;
  for (int idx : c.domain().sites()) m[c.domain().coord(idx)] = c.is_blue(idx);
  return m;
}

}  // namespace oracle
