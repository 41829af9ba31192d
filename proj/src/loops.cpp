#include "armwind/loops.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "armwind/walker.hpp"

namespace armwind {

std::size_t LoopEnsemble::edge_count() const {
  std::size_t n = 0;
  for (const Loop& l : loops) n += l.edges.size();
  return n;
}

namespace {

struct Painted {
  const DiscreteDomain& d;
  const Configuration& c;
  bool colored(int idx) const { return d.is_colorable(idx); }
  bool is_blue(int idx) const { return d.is_s_boundary(idx) || c.is_blue(idx); }
};

}  // namespace

std::size_t count_bichromatic_pairs(const Configuration& config) {
  const DiscreteDomain& d = config.domain();
  const Painted paint{d, config};
  std::size_t n = 0;
  for (int x : d.sites()) {
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(x, k);
      if (paint.is_blue(x) == paint.is_blue(y)) continue;
      // Count each pair once: from the domain site, or once per ordered pair.
      if (!d.contains(y) || x < y) ++n;
    }
  }
  return n;
}

LoopEnsemble extract_loop_ensemble(const Configuration& config) {
  const DiscreteDomain& d = config.domain();
  const Painted paint{d, config};
  auto is_blue = [&](int idx) { return paint.is_blue(idx); };
  LoopEnsemble out;
  out.domain = config.domain_ptr();
  std::vector<std::uint8_t> used(d.grid_size(), 0);  // bit k: edge (site, k) visited

  auto visit = [&](DirectedEdge start) {
    Loop loop;
    std::int64_t area2 = 0;  // twice the signed area in scaled axial units
    DirectedEdge e = start;
    do {
      used[e.site] |= std::uint8_t(1U << e.dir);
      const Vertex from = d.tail(e);
      const Vertex to = d.head(e);
      area2 += std::int64_t(from.p) * to.q - std::int64_t(from.q) * to.p;
      loop.winding += winding_increment(from, to);
      loop.edges.push_back(e);
      loop.vertices.push_back(to);
      e = step(d, e, is_blue);
    } while (!(e == start));
    loop.counterclockwise = area2 > 0;
    loop.surrounds_origin = std::abs(loop.winding) > std::numbers::pi;
    out.loops.push_back(std::move(loop));
  };

  // Every bichromatic edge has a blue side that is a domain or s-boundary site.
  auto scan = [&](int x) {
    if (!is_blue(x)) return;
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(x, k);
      if (!d.contains(y) || is_blue(y) || (used[x] >> k & 1U)) continue;
      visit({x, k});
    }
  };
  for (int x : d.sites()) scan(x);
  for (int x : d.s_boundary()) scan(x);
  return out;
}

namespace {

constexpr std::uint8_t kTouchInner = 1, kTouchOuter = 2;

std::uint8_t vertex_contact(const DiscreteDomain& d, const Annulus& a, DirectedEdge e) {
  std::uint8_t c = 0;
  for (int h : {e.site, d.neighbor(e.site, e.dir), third_hexagon(d, e)}) {
    if (a.in_hole(h)) c |= kTouchInner;
    else if (!a.contains(h)) c |= kTouchOuter;
  }
  return c;
}

}  // namespace

bool loop_arm_event(const LoopEnsemble& ensemble, const Annulus& annulus, int k) {
  require(k == 1 || k == 2 || k == 4, ErrorKind::InvalidParameter, "loop arm event needs k in {1,2,4}");
  require(annulus.inner_radius() > 0, ErrorKind::InvalidParameter, "loop arm event needs r > 0");
  const DiscreteDomain& d = *ensemble.domain;
  int touching_loops = 0;
  for (const Loop& loop : ensemble.loops) {
    if (!loop.counterclockwise) continue;
    std::vector<std::uint8_t> contact(loop.edges.size());
    bool any_inner = false, any_outer = false, inside = true;
    for (std::size_t m = 0; m < loop.edges.size(); ++m) {
      contact[m] = vertex_contact(d, annulus, loop.edges[m]);
      any_inner |= (contact[m] & kTouchInner) != 0;
      any_outer |= (contact[m] & kTouchOuter) != 0;
      inside &= annulus.contains(d.neighbor(loop.edges[m].site, loop.edges[m].dir));
    }
    if (k == 1) {
      if (loop.surrounds_origin && inside && !any_inner) return false;
      continue;
    }
    if (!(any_inner && any_outer)) continue;
    ++touching_loops;
    if (k == 2) return true;
    // Arcs between consecutive outer contacts that meet the inner boundary; a
    // vertex touching both counts as an arc of its own.
    std::size_t first = 0;
    while (!(contact[first] & kTouchOuter)) ++first;
    const std::size_t n = contact.size();
    int arcs = 0;
    bool open_hit = false;
    for (std::size_t s = 1; s <= n; ++s) {
      const std::uint8_t c = contact[(first + s) % n];
      if (c & kTouchOuter) {
        arcs += open_hit;
        open_hit = false;
        if (c & kTouchInner) ++arcs;
      } else if (c & kTouchInner) {
        open_hit = true;
      }
    }
    if (arcs >= 2 || touching_loops >= 2) return true;
  }
  return k == 1;
}

void write_loops_jsonl(std::ostream& out, const LoopEnsemble& ensemble) {
  const double eta = ensemble.domain->mesh();
  out << std::setprecision(12);
  for (const Loop& loop : ensemble.loops) {
    out << "{\"ccw\":" << (loop.counterclockwise ? "true" : "false")
        << ",\"surrounds_origin\":" << (loop.surrounds_origin ? "true" : "false")
        << ",\"vertices\":[";
    for (std::size_t m = 0; m < loop.vertices.size(); ++m) {
      const Point z = loop.vertices[m].position() * eta;
      out << (m ? "," : "") << '[' << z.real() << ',' << z.imag() << ']';
    }
    out << "]}\n";
  }
}

}  // namespace armwind
