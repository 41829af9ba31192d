#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "armwind/arms.hpp"
#include "armwind/loops.hpp"
#include "armwind/rng.hpp"

using namespace armwind;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force count over unordered neighbor pairs, s-boundary painted blue.
std::size_t bichromatic_pairs(const Configuration& c) {
  const DiscreteDomain& d = c.domain();
  auto colorable = [&](SiteCoord s) { return d.contains(s) || (d.in_grid(s) && d.is_s_boundary(d.index(s))); };
  auto blue = [&](SiteCoord s) { return d.contains(s) ? c.is_blue(d.index(s)) : true; };
  std::size_t n = 0;
  for (int j = -d.half_width(); j <= d.half_width(); ++j) {
    for (int i = -d.half_width(); i <= d.half_width(); ++i) {
      const SiteCoord s{i, j};
      if (!colorable(s)) continue;
      for (int k = 0; k < 3; ++k) {
        const SiteCoord t = s + kDirections[k];
        if (d.in_grid(t) && colorable(t) && blue(s) != blue(t)) ++n;
      }
    }
  }
  return n;
}

// Even-odd ray casting along the positive real axis.
bool encloses_origin(const Loop& loop) {
  bool inside = false;
  const std::size_t n = loop.vertices.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = loop.vertices[k].position(), b = loop.vertices[(k + 1) % n].position();
    if ((a.imag() > 0) != (b.imag() > 0)) {
      const double x = a.real() + (b.real() - a.real()) * (0 - a.imag()) / (b.imag() - a.imag());
      if (x > 0) inside = !inside;
    }
  }
  return inside;
}

struct Agreement {
  long checked = 0;
  long mismatches = 0;
};

void compare(const Configuration& c, const Annulus& a, Agreement& out) {
  static const ColorSequence b = ColorSequence::parse("B"), by = ColorSequence::parse("BY"),
                             byby = ColorSequence::parse("BYBY");
  const LoopEnsemble e = extract_loop_ensemble(c);
  out.mismatches += loop_arm_event(e, a, 1) != detect_arms(c, a, b);
  out.mismatches += loop_arm_event(e, a, 2) != detect_arms(c, a, by);
  out.mismatches += loop_arm_event(e, a, 4) != detect_arms(c, a, byby);
  ++out.checked;
}

}  // namespace

TEST_SUITE("loops") {

TEST_CASE("all-blue configuration has no loops") {
  const auto d = build_disc_domain(12);
  const auto c = Configuration::uniform(d, Color::Blue);
  const auto e = extract_loop_ensemble(c);
  CHECK(e.loops.empty());
  const Annulus a = annulus_sites(d, 3, 12);
  CHECK(loop_arm_event(e, a, 1));
  CHECK(!loop_arm_event(e, a, 2));
  CHECK(!loop_arm_event(e, a, 4));
}

TEST_CASE("single yellow hexagon at the origin") {
  const auto d = build_disc_domain(8);
  const auto c = Configuration::from_function(
      d, [](SiteCoord s) { return s == SiteCoord{0, 0} ? Color::Yellow : Color::Blue; });
  const auto e = extract_loop_ensemble(c);
  REQUIRE(e.loops.size() == 1);
  const Loop& l = e.loops[0];
  REQUIRE(l.edges.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    const DirectedEdge ed = l.edges[k];
    CHECK(d->neighbor(ed.site, ed.dir) == d->origin());  // yellow origin on the left
    CHECK(c.is_blue(ed.site));
    CHECK(l.vertices[k].norm9() == 3);
  }
  CHECK(l.counterclockwise);
  CHECK(l.surrounds_origin);
  CHECK(std::abs(l.winding - 2 * kPi) < 1e-9);
}

TEST_CASE("partition and winding properties") {
  for (int R : {5, 16, 32}) {
    const auto d = build_disc_domain(R);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto c = sample_configuration(d, derive_seed(5, seed));
      const auto e = extract_loop_ensemble(c);
      CHECK(e.edge_count() == count_bichromatic_pairs(c));
      CHECK(e.edge_count() == bichromatic_pairs(c));
      for (const Loop& l : e.loops) {
        const double w = std::abs(l.winding);
        CHECK((w < 1e-9 || std::abs(w - 2 * kPi) < 1e-9));
        CHECK(l.surrounds_origin == encloses_origin(l));
        const std::size_t n = l.edges.size();
        for (std::size_t k = 0; k < n; ++k) {
          CHECK(d->tail(l.edges[(k + 1) % n]) == l.vertices[k]);
        }
      }
    }
  }
}

TEST_CASE("yellow circuit blocks the one-arm event") {
  const auto d = build_disc_domain(16);
  const auto c = Configuration::from_function(d, [](SiteCoord s) {
    const double r = std::abs(embed(s));
    return r >= 5.5 && r <= 7 ? Color::Yellow : Color::Blue;
  });
  const Annulus a = annulus_sites(d, 2, 16);
  const auto e = extract_loop_ensemble(c);
  CHECK(!loop_arm_event(e, a, 1));
  CHECK(!detect_arms(c, a, ColorSequence::parse("B")));
}

TEST_CASE("argument checks") {
  const auto d = build_disc_domain(8);
  const auto e = extract_loop_ensemble(sample_configuration(d, 1));
  CHECK_THROWS_AS(loop_arm_event(e, annulus_sites(d, 2, 8), 3), Error);
  CHECK_THROWS_AS(loop_arm_event(e, annulus_sites(d, 0, 8), 1), Error);
}

TEST_CASE("loop events equal direct detection on every tiny configuration") {
  const auto d = build_disc_domain(3);
  const Annulus a = annulus_sites(d, 1, 3);
  const auto sites = d->sites();
  REQUIRE(sites.size() == 19);
  Agreement agree;
  std::vector<std::uint64_t> bits(d->word_count());
  for (std::uint32_t m = 0; m < (1U << sites.size()); ++m) {
    std::fill(bits.begin(), bits.end(), 0);
    for (std::size_t k = 0; k < sites.size(); ++k) {
      if ((m >> k) & 1U) bits[sites[k] >> 6] |= std::uint64_t{1} << (sites[k] & 63);
    }
    compare(Configuration(d, bits, m), a, agree);
  }
  CHECK(agree.checked == (1L << 19));
  CHECK(agree.mismatches == 0);
}

TEST_CASE("loop events equal direct detection on random configurations") {
  SUBCASE("R_lat = 16 restricted to radius 12, annulus (4, 12)") {
    const auto big = build_disc_domain(16);
    const auto d = build_disc_domain(12);
    const Annulus a = annulus_sites(d, 4, 12);
    Agreement agree;
    for (std::uint64_t t = 0; t < 100000; ++t) {
      compare(sample_configuration(big, derive_seed(2024, t)).restricted_to(d), a, agree);
    }
    CHECK(agree.mismatches == 0);
  }
  SUBCASE("R_lat = 32, annulus (3, 32)") {
    const auto d = build_disc_domain(32);
    const Annulus a = annulus_sites(d, 3, 32);
    Agreement agree;
    for (std::uint64_t t = 0; t < 5000; ++t) compare(sample_configuration(d, derive_seed(31, t)), a, agree);
    CHECK(agree.mismatches == 0);
  }
}

TEST_CASE("jsonl export") {
  const auto d = build_disc_domain(6);
  const auto e = extract_loop_ensemble(sample_configuration(d, 4));
  std::ostringstream os;
  write_loops_jsonl(os, e);
  std::istringstream is(os.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    CHECK(line.rfind("{\"ccw\":", 0) == 0);
    ++n;
  }
  CHECK(n == e.loops.size());
}

}  // TEST_SUITE
