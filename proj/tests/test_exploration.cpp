#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "armwind/exploration.hpp"
#include "armwind/rng.hpp"

using namespace armwind;

namespace {

constexpr double kPi = std::numbers::pi;

bool bit(std::span<const std::uint64_t> bits, int idx) { return (bits[idx >> 6] >> (idx & 63)) & 1U; }

struct Painted {
  const Configuration& config;
  BoundaryColoring boundary;

  bool operator()(SiteCoord s) const {
    const DiscreteDomain& d = config.domain();
    const int idx = d.index(s);
    return d.contains(idx) ? config.is_blue(idx) : bit(boundary.blue_bits(), idx);
  }
};

void check_path_invariants(const Configuration& c, const ExplorationPath& p) {
  const DiscreteDomain& d = c.domain();
  const Painted paint{c, split_boundary(d, p.ends)};
  REQUIRE(p.edges.size() + 1 == p.size());
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const DirectedEdge e = p.edges[k];
    CHECK(seen.insert({e.site, e.dir}).second);
    CHECK(d.tail(e) == p.vertices[k]);
    CHECK(d.head(e) == p.vertices[k + 1]);
    const Vertex diff{p.vertices[k + 1].p - p.vertices[k].p, p.vertices[k + 1].q - p.vertices[k].q};
    CHECK(diff.norm9() == 3);
    CHECK(paint(d.coord(e.site)));
    CHECK(!paint(d.coord(d.neighbor(e.site, e.dir))));
    const double inc = p.cum_winding[k + 1] - p.cum_winding[k];
    CHECK(std::abs(inc) < kPi);
    const double want = std::arg(p.vertices[k + 1].position() / p.vertices[k].position());
    CHECK(std::abs(inc - want) < 1e-12);
  }
}

}  // namespace

TEST_SUITE("exploration") {

TEST_CASE("all-blue configuration hugs the left boundary") {
  for (int R : {4, 9, 20}) {
    const auto d = build_disc_domain(R);
    const auto c = Configuration::uniform(d, Color::Blue);
    const auto ends = select_e_vertices(*d, 0, kPi);
    const auto p = trace_exploration(c, ends);
    CHECK(p.stop == StopReason::ReachedEnd);
    CHECK(p.vertices.back() == ends.b.v);
    const auto boundary = split_boundary(*d, ends);
    for (const DirectedEdge& e : p.edges) {
      const int left = d->neighbor(e.site, e.dir);
      CHECK(d->is_s_boundary(left));
      CHECK(!bit(boundary.blue_bits(), left));
    }
    CHECK(!detect_event_A(p));
    check_path_invariants(c, p);
  }
}

TEST_CASE("half-plane colorings") {
  const auto d = build_disc_domain(16);
  const auto ends = select_e_vertices(*d, 0, kPi);
  SUBCASE("blue right half crosses the origin hexagon") {
    const auto c = Configuration::from_function(
        d, [](SiteCoord s) { return embed(s).real() > 0 ? Color::Blue : Color::Yellow; });
    const auto p = trace_exploration(c, ends);
    CHECK(detect_event_A(p));
    check_path_invariants(c, p);
    // The crossing part runs upward near the imaginary axis.
    for (const Vertex& v : p.vertices) {
      const Point z = v.position();
      if (std::abs(z) < 12) CHECK(std::abs(z.real()) <= 1.0);
    }
  }
  SUBCASE("blue lower half keeps to the boundary") {
    const auto c = Configuration::from_function(
        d, [](SiteCoord s) { return embed(s).imag() < 0 ? Color::Blue : Color::Yellow; });
    const auto p = trace_exploration(c, ends);
    check_path_invariants(c, p);
    CHECK(std::abs(p.cum_winding.back()) < 2 * kPi);
  }
}

TEST_CASE("reference walker agrees edge for edge") {
  for (int R : {4, 7, 16}) {
    const auto d = build_disc_domain(R);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto c = sample_configuration(d, derive_seed(1234, seed));
      const auto ends = select_e_vertices(*d, 0.1 * seed, 0.1 * seed + 2.7);
      const auto p = trace_exploration(c, ends);
      const Painted paint{c, split_boundary(*d, ends)};
      const auto ref = oracle::reference_walk(ends.a.v, ends.b.v, paint, 10 * d->grid_size());
      REQUIRE(ref.size() == p.vertices.size());
      CHECK(ref == p.vertices);
      check_path_invariants(c, p);
    }
  }
}

TEST_CASE("color swap with reversed endpoints reverses the path") {
  const auto d = build_disc_domain(18);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = sample_configuration(d, seed);
    const auto ends = select_e_vertices(*d, 0.5, 3.5);
    const auto fwd = trace_exploration(c, ends);
    const auto back = trace_exploration(c.with_swapped_colors(), EVertexPair{ends.b, ends.a});
    std::vector<Vertex> rev(back.vertices.rbegin(), back.vertices.rend());
    CHECK(rev == fwd.vertices);
    CHECK(std::abs(fwd.cum_winding.back() + back.cum_winding.back()) < 1e-9);
  }
}

TEST_CASE("reflection negates the winding") {
  const auto d = build_disc_domain(21);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = sample_configuration(d, seed);
    const auto ends = select_e_vertices(*d, 0.4, 2.9);
    const auto mirrored = select_e_vertices(*d, -0.4, -2.9);
    REQUIRE(mirrored.a.v == conjugate(ends.a.v));
    REQUIRE(mirrored.b.v == conjugate(ends.b.v));
    const auto p = trace_exploration(c, ends);
    const auto q = trace_exploration(c.conjugated().with_swapped_colors(), mirrored);
    REQUIRE(p.size() == q.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      CHECK(q.vertices[k] == conjugate(p.vertices[k]));
      CHECK(q.cum_winding[k] == -p.cum_winding[k]);
    }
  }
}

TEST_CASE("event A equals the two-arm connectivity event") {
  const auto d = build_disc_domain(16);
  const auto ends = select_e_vertices(*d, 0, kPi);
  const auto boundary = split_boundary(*d, ends);
  std::vector<SiteCoord> right, left;
  for (int idx : d->s_boundary()) (bit(boundary.blue_bits(), idx) ? right : left).push_back(d->coord(idx));
  int mismatches = 0, hits = 0;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    const auto c = sample_configuration(d, derive_seed(77, t));
    const auto p = trace_exploration(c, ends, boundary);
    const bool event = detect_event_A(p);
    const Painted paint{c, boundary};
    mismatches += event != oracle::two_arm_origin_event(*d, paint, right, left);
    hits += event;
  }
  CHECK(mismatches == 0);
  CHECK(hits > 1000);
}

TEST_CASE("stop rules") {
  const auto d = build_disc_domain(32);
  const auto ends = select_e_vertices(*d, 0, kPi);
  int stopped = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = sample_configuration(d, seed);
    const auto full = trace_exploration(c, ends);
    const auto hit = origin_hit(full);
    const auto p = trace_exploration(c, ends, StopRule{true, 0});
    if (hit) {
      ++stopped;
      CHECK(p.stop == StopReason::OriginHexagon);
      CHECK(p.size() == *hit + 1);
    } else {
      CHECK(p.stop == StopReason::ReachedEnd);
      CHECK(p.size() == full.size());
    }
    const auto q = trace_exploration(c, ends, StopRule{false, 10});
    const auto tau = first_hit(full, 10);
    if (tau) {
      CHECK(q.stop == StopReason::Radius);
      CHECK(q.size() == *tau + 1);
    }
  }
  CHECK(stopped > 0);
}

TEST_CASE("hit times are ordered") {
  const auto d = build_disc_domain(48);
  const auto ends = select_e_vertices(*d, 0, kPi);
  const std::vector<double> radii{2, 4, 8, 16, 32};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = trace_exploration(sample_configuration(d, seed), ends);
    const HitTimes h = hit_times(p, radii);
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
      if (h.tau[i]) {
        REQUIRE(h.tau[i + 1].has_value());
        CHECK(*h.tau[i + 1] <= *h.tau[i]);
      }
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (!h.tau[j]) continue;
        REQUIRE(h.last_before[i][j].has_value());
        CHECK(*h.last_before[i][j] <= *h.tau[j]);
        if (*h.tau[i] > 0) CHECK(*h.last_before[i][j] + 1 >= *h.tau[i]);
      }
    }
  }
}

TEST_CASE("winding ranges and argument errors") {
  const auto d = build_disc_domain(10);
  const auto ends = select_e_vertices(*d, 0, kPi);
  const auto p = trace_exploration(sample_configuration(d, 3), ends);
  CHECK(winding(p, 0, p.size() - 1) == p.cum_winding.back());
  CHECK_THROWS_AS(winding(p, 2, 1), Error);
  CHECK_THROWS_AS(trace_exploration(sample_configuration(d, 3), EVertexPair{ends.a, ends.a}), Error);
  // A simple path from 1 to -1 winds by about +pi or -pi.
  CHECK(std::abs(std::abs(p.cum_winding.back()) - kPi) < 0.5);
}

TEST_CASE("path csv") {
  const auto d = build_disc_domain(6);
  const auto p = trace_exploration(sample_configuration(d, 9), select_e_vertices(*d, 0, kPi));
  std::ostringstream os;
  write_path_csv(os, p);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "index,x,y,cum_winding");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == p.size());
}

}  // TEST_SUITE
