#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "armwind/lattice.hpp"
#include "armwind/rng.hpp"

using namespace armwind;

namespace {

bool fits_disc(SiteCoord s, double R) {
  for (const Vertex& v : oracle::corners(s)) {
    if (std::abs(v.position()) > R + 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("hexagon corners agree with the floating-point construction") {
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      const auto a = hexagon_vertices({i, j});
      const auto b = oracle::corners({i, j});
      CHECK(std::set<Vertex>(a.begin(), a.end()) == std::set<Vertex>(b.begin(), b.end()));
      for (const Vertex& v : a) {
        CHECK(std::abs(std::abs(v.position() - embed({i, j})) - 1 / std::sqrt(3.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("triangle vertex is shared by its three hexagons") {
  const SiteCoord s{2, -1};
  for (int k = 0; k < 6; ++k) {
    const Vertex v = triangle_vertex(s, k);
    const auto hs = oracle::hexes_at(v);
    REQUIRE(hs.size() == 3);
    const std::set<SiteCoord> got(hs.begin(), hs.end());
    CHECK(got == std::set<SiteCoord>{s, s + kDirections[k], s + kDirections[rotate_dir(k, 1)]});
  }
}

TEST_CASE("R_lat = 2 holds the origin and its six neighbors") {
  const auto d = build_disc_domain(2);
  std::set<SiteCoord> got;
  for (int idx : d->sites()) got.insert(d->coord(idx));
  std::set<SiteCoord> want;
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      if (fits_disc({i, j}, 2)) want.insert({i, j});
    }
  }
  CHECK(got == want);
  CHECK(got.size() == 7);
}

TEST_CASE("domain membership matches the corner predicate") {
  for (int R : {3, 5, 16, 37}) {
    const auto d = build_disc_domain(R);
    for (int i = -R - 2; i <= R + 2; ++i) {
      for (int j = -R - 2; j <= R + 2; ++j) {
        CHECK(d->contains(SiteCoord{i, j}) == fits_disc({i, j}, R));
      }
    }
  }
}

TEST_CASE("large domain has area density close to one") {
  const auto d = build_disc_domain(1000);
  const double hex_area = std::sqrt(3.0) / 2;  // hexagon of inradius 1/2
  const double ratio = double(d->sites().size()) * hex_area / (std::numbers::pi * 1e6);
  CHECK(ratio >= 0.95);
  CHECK(ratio <= 1.0);
}

TEST_CASE("invalid radii are rejected") {
  CHECK_THROWS_AS(build_disc_domain(1), Error);
  CHECK_THROWS_AS(build_disc_domain(0), Error);
  try {
    build_disc_domain(1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("neighbors are symmetric and the complement is connected") {
  const auto d = build_disc_domain(23);
  std::size_t interior = 0;
  for (int idx : d->sites()) {
    int n = 0;
    for (int k = 0; k < 6; ++k) {
      const int nb = d->neighbor(idx, k);
      CHECK(d->neighbor(nb, rotate_dir(k, 3)) == idx);
      n += d->contains(nb);
    }
    interior += n == 6;
  }
  CHECK(interior > 0);
  // Flood the complement from the grid corner.
  std::vector<char> seen(d->grid_size(), 0);
  std::vector<SiteCoord> stack{{-d->half_width(), -d->half_width()}};
  seen[d->index(stack[0])] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const SiteCoord s = stack.back();
    stack.pop_back();
    for (const auto& dir : kDirections) {
      const SiteCoord t = s + dir;
      if (!d->in_grid(t) || d->contains(t) || seen[d->index(t)]) continue;
      seen[d->index(t)] = 1;
      ++reached;
      stack.push_back(t);
    }
  }
  CHECK(reached + d->sites().size() == d->grid_size());
}

TEST_CASE("boundary cycle keeps the domain on its left") {
  const auto d = build_disc_domain(20);
  const auto edges = d->boundary_edges();
  REQUIRE(edges.size() > 6);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const DirectedEdge e = edges[k];
    CHECK(!d->contains(e.site));
    CHECK(d->is_s_boundary(e.site));
    CHECK(d->contains(d->neighbor(e.site, e.dir)));
    CHECK(d->head(e) == d->tail(edges[(k + 1) % edges.size()]));
  }
  for (const EVertex& ev : d->e_vertices()) CHECK(d->head(edges[ev.edge]) == ev.v);
}

TEST_CASE("e-vertices near 1 and -1") {
  const auto d = build_disc_domain(64);
  const auto ends = select_e_vertices(*d, 0.0, std::numbers::pi);
  CHECK(!(ends.a.v == ends.b.v));
  CHECK(std::abs(ends.a.v.position() / 64.0 - Point(1, 0)) <= 2.0 / 64);
  CHECK(std::abs(ends.b.v.position() / 64.0 - Point(-1, 0)) <= 2.0 / 64);
  // Exhaustive scan: nothing strictly closer.
  for (const EVertex& e : d->e_vertices()) {
    CHECK(std::abs(e.v.position() - Point(64, 0)) >= std::abs(ends.a.v.position() - Point(64, 0)) - 1e-9);
    CHECK(std::abs(e.v.position() - Point(-64, 0)) >= std::abs(ends.b.v.position() - Point(-64, 0)) - 1e-9);
  }
}

TEST_CASE("equal endpoints are rejected") {
  const auto d = build_disc_domain(16);
  CHECK_THROWS_AS(select_e_vertices(*d, 1.0, 1.0), Error);
}

TEST_CASE("e-vertex selection commutes with reflection") {
  const auto d = build_disc_domain(40);
  for (double a : {0.3, 1.1, 2.0, 4.4}) {
    const double b = a + 2.5;
    const auto fwd = select_e_vertices(*d, a, b);
    const auto ref = select_e_vertices(*d, -b, -a);
    // Reflection reverses orientation, so a and b trade places.
    CHECK(conjugate(fwd.a.v) == ref.b.v);
    CHECK(conjugate(fwd.b.v) == ref.a.v);
  }
}

TEST_CASE("sampling is deterministic and fair") {
  const auto d = build_disc_domain(30);
  CHECK(sample_configuration(d, 42) == sample_configuration(d, 42));
  CHECK(!(sample_configuration(d, 42) == sample_configuration(d, 43)));

  const auto big = build_disc_domain(565);
  const auto c = sample_configuration(big, 7);
  const double n = double(big->sites().size());
  REQUIRE(n >= 1e6);
  CHECK(std::abs(double(c.count_blue()) / n - 0.5) <= 0.002);

  // Chi-square over a deterministic 16-way partition of the sites.
  constexpr int kParts = 16;
  std::array<double, kParts> blue{}, total{};
  for (int idx : big->sites()) {
    const auto s = big->coord(idx);
    const int part = ((s.i % 4 + 4) % 4) * 4 + ((s.j % 4 + 4) % 4);
    total[part] += 1;
    blue[part] += c.is_blue(idx);
  }
  double chi2 = 0;
  for (int p = 0; p < kParts; ++p) {
    const double e = total[p] / 2;
    chi2 += (blue[p] - e) * (blue[p] - e) / e + (total[p] - blue[p] - e) * (total[p] - blue[p] - e) / e;
  }
  const boost::math::chi_squared dist(kParts);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 1e-6);
}

TEST_CASE("color transforms") {
  const auto d = build_disc_domain(12);
  const auto c = sample_configuration(d, 5);
  const auto sw = c.with_swapped_colors();
  for (int idx : d->sites()) CHECK(sw.is_blue(idx) != c.is_blue(idx));
  CHECK(sw.with_swapped_colors() == c);
  const auto cj = c.conjugated();
  for (int idx : d->sites()) {
    CHECK(cj.color(conjugate(d->coord(idx))) == c.color(idx));
  }
  CHECK(cj.conjugated() == c);
}

TEST_CASE("split boundary paints the arc from a to b blue") {
  const auto d = build_disc_domain(24);
  const auto ends = select_e_vertices(*d, 0.0, std::numbers::pi);
  const auto b = split_boundary(*d, ends);
  const auto bits = b.blue_bits();
  std::size_t blue = 0, yellow = 0;
  for (int idx : d->s_boundary()) {
    const bool is_blue = (bits[idx >> 6] >> (idx & 63)) & 1U;
    const double y = embed(d->coord(idx)).imag();
    // Far from the endpoints the upper half is the counterclockwise arc a -> b.
    if (std::abs(y) > 3) CHECK(is_blue == (y > 0));
    (is_blue ? blue : yellow)++;
  }
  CHECK(blue > 0);
  CHECK(yellow > 0);
  for (int idx : d->sites()) CHECK(((bits[idx >> 6] >> (idx & 63)) & 1U) == 0);
}

TEST_CASE("annulus flags") {
  const auto d = build_disc_domain(16);
  SUBCASE("r = 0 gives the disc of radius R") {
    const Annulus a = annulus_sites(d, 0, 6);
    for (int idx : d->sites()) {
      CHECK(a.contains(idx) == (hexagon_min_abs(d->coord(idx)) <= 6));
    }
  }
  SUBCASE("R beyond the domain is clipped") {
    const Annulus a = annulus_sites(d, 2, 100);
    for (int idx : a.sites()) CHECK(d->contains(idx));
  }
  SUBCASE("thin ring") {
    const Annulus a = annulus_sites(d, 16 - 0.5, 16);
    REQUIRE(!a.sites().empty());
    for (int idx : a.sites()) {
      const SiteCoord s = d->coord(idx);
      // Geometric predicate: the hexagon crosses the circle of radius r.
      CHECK(hexagon_max_abs(s) >= 15.5);
      CHECK(hexagon_min_abs(s) <= 16);
      bool inner = false, outer = false;
      for (const auto& dir : kDirections) {
        const SiteCoord t = s + dir;
        const bool hole = d->contains(t) && hexagon_max_abs(t) < 15.5;
        const bool member = d->contains(t) && !hole && hexagon_min_abs(t) <= 16;
        inner |= hole;
        outer |= !hole && !member;
      }
      CHECK(a.touches_inner(idx) == inner);
      CHECK(a.touches_outer(idx) == outer);
    }
  }
  CHECK_THROWS_AS(annulus_sites(d, 5, 5), Error);
  CHECK_THROWS_AS(annulus_sites(d, -1, 5), Error);
}

TEST_CASE("derived seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(99, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

}  // TEST_SUITE
