#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cylpack/line_families.hpp"

using namespace cylpack;

TEST_CASE("K and beta") {
  CHECK(k_for(7.0) == doctest::Approx(4.0 * std::sqrt(3.0)));
  CHECK(beta(32, 7.0) == doctest::Approx(4.0 * std::sqrt(3.0) + 7.0 / 32.0));
  CHECK(beta(1e9, 7.0) == doctest::Approx(4.0 * std::sqrt(3.0)));
  CHECK_THROWS_AS(beta(32, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(beta(0, 7.0), std::invalid_argument);
}

TEST_CASE("global family axes") {
  const auto pts = build_set(40);
  const CylinderFamily fam = global_family(pts);
  CHECK(fam.kind == FamilyKind::global);
  CHECK(fam.radius == 0.5);
  REQUIRE(fam.size() == pts.size());
  for (std::size_t i = 0; i < fam.size(); i += 37) {
    const Line& l = fam.lines[i];
    const double d = pts[i].ring->d;
    // Direction is horizontal-perpendicular to OA_i and rises with slope beta(d).
    CHECK(l.base().z == 0.0);
    CHECK(dot(l.dir(), Vec3{pts[i].x, pts[i].y, 0.0}) == doctest::Approx(0.0).scale(d * d));
    const double horiz = std::hypot(l.dir().x, l.dir().y);
    CHECK(horiz == doctest::Approx(d));
    CHECK(l.dir().z / horiz == doctest::Approx(beta(d, 7.0)));
    CHECK(std::tan(elevation_angle(l)) == doctest::Approx(beta(d, 7.0)));
  }
  CHECK(*fam.params.L == 7.0);
  CHECK(*fam.params.K == doctest::Approx(std::sqrt(48.0)));
}

TEST_CASE("global family input validation") {
  const auto pts = build_set(40);
  CHECK_THROWS_AS(global_family(pts, 5.9), std::invalid_argument);
  std::vector<PlanarPoint> bad{{10.0, 0.0, std::nullopt}};
  CHECK_THROWS_AS(global_family(bad), std::invalid_argument);
  // A point tagged with an impossible ring index.
  std::vector<PlanarPoint> forged{{40.0, 0.0, RingIndex{40, 6, 1}}};
  CHECK_THROWS_AS(global_family(forged), std::invalid_argument);
  const CylinderFamily loose = global_family(bad, 7.0, true);
  CHECK(loose.params.unsafe);
  CHECK(loose.size() == 1);
}

TEST_CASE("perpendicular family") {
  const auto pts = build_set(36);
  const CylinderFamily fam = perpendicular_family(pts, 0.5);
  CHECK(fam.size() == pts.size());
  for (const Line& l : fam.lines) CHECK(l.dir() == Vec3{0, 0, 1});
  CHECK_THROWS_AS(perpendicular_family(pts, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(perpendicular_family(pts, 0.0), std::invalid_argument);
  CHECK(perpendicular_family(std::vector<PlanarPoint>{}, 0.5).size() == 0);
}

TEST_CASE("local family tilt and radius") {
  std::vector<PlanarPoint> pts{{3, 4, std::nullopt}, {-2, 1, std::nullopt}, {0, -6, std::nullopt}};
  const double r = 0.5;
  const double eps_max = 8 * r * r / std::pow(6.0, 4);
  CHECK(local_eps_max(pts, r) == doctest::Approx(eps_max));
  const CylinderFamily fam = local_family(pts, r);
  CHECK(*fam.params.eps == doctest::Approx(eps_max));
  CHECK(*fam.params.T == doctest::Approx(1.0 / eps_max));
  CHECK(fam.radius == doctest::Approx(r * (1 - eps_max)));
  CHECK(fam.lines[0].dir().x == 4.0);
  CHECK(fam.lines[0].dir().y == -3.0);
  CHECK(fam.lines[0].dir().z == doctest::Approx(1.0 / eps_max));

  const CylinderFamily half = local_family(pts, r, eps_max / 2);
  CHECK(*half.params.eps == doctest::Approx(eps_max / 2));
  CHECK_THROWS_AS(local_family(pts, r, eps_max * 1.01), std::invalid_argument);
  // 1/T computed from T = R^4/(8r^2) is accepted at the boundary.
  const double T = std::pow(6.0, 4) / (8 * r * r);
  CHECK(*local_family(pts, r, 1.0 / T).params.eps <= local_eps_max(pts, r));
  CHECK_THROWS_AS(local_family(pts, r, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(local_family(pts, 4.0), std::invalid_argument);  // not 2r-separated
  std::vector<PlanarPoint> origin{{0, 0, std::nullopt}, {3, 0, std::nullopt}};
  CHECK_THROWS_AS(local_family(origin, r), std::invalid_argument);
}

TEST_CASE("family kind names round-trip") {
  for (FamilyKind k : {FamilyKind::perpendicular, FamilyKind::local, FamilyKind::global}) {
    CHECK(parse_family_kind(to_string(k)) == k);
  }
  CHECK(parse_family_kind("perpendicular") == FamilyKind::perpendicular);
  CHECK_FALSE(parse_family_kind("tilted").has_value());
}
