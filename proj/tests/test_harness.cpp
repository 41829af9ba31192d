#include "doctest.h"

#include "armwind/error.hpp"
#include "armwind/harness.hpp"

using namespace armwind;

TEST_SUITE("harness") {

TEST_CASE("oracle verification on small instances") {
  const auto rows = oracle_verify(18, 300, 16, 5, 2);
  bool random_seen = false;
  for (const auto& r : rows) {
    if (r.check != "loops-random") CHECK(r.sites <= 18);
    CHECK(r.configs == (r.check == "loops-random" ? 300 : std::int64_t{1} << r.sites));
    CHECK(r.mismatches == 0);
    random_seen |= r.check == "loops-random";
  }
  CHECK(random_seen);
  CHECK(rows.size() >= 4);
  CHECK(oracle_verify(6, 0, 16, 5, 1).size() == 2);
  CHECK_THROWS_AS(oracle_verify(30, 0, 16, 5, 1), Error);
}

TEST_CASE("faces rate and quasi-multiplicativity are thread independent") {
  CHECK(to_csv(faces_rate(16, 300, 3, 1)) == to_csv(faces_rate(16, 300, 3, 4)));
  const auto a = quasi_multiplicativity("BY", 2, 6, 6, 16, 16, 400, 9, 1);
  const auto b = quasi_multiplicativity("BY", 2, 6, 6, 16, 16, 400, 9, 3);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(a.inclusion_violations == 0);
  CHECK(a.p14 <= a.p12);
  CHECK(a.p14 <= a.p34);
  CHECK_THROWS_AS(quasi_multiplicativity("BY", 6, 2, 6, 16, 16, 10, 9, 1), Error);
  CHECK_THROWS_AS(faces_rate(16, 0, 1, 1), Error);
}

}  // TEST_SUITE
