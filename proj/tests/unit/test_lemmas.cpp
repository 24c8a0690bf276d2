#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cylpack/lemmas.hpp"
#include "cylpack/random.hpp"
#include "oracles.hpp"

using namespace cylpack;

TEST_CASE("quartic coefficients for small n") {
  const auto c0 = quartic_coefficients(0);
  CHECK(c0[0] == SqrtThreeInt{BigInt(-32), BigInt(56)});
  CHECK(c0[4] == SqrtThreeInt{BigInt(0), BigInt(0)});
  const auto c1 = quartic_coefficients(1);
  CHECK(c1[0] == SqrtThreeInt{BigInt(0), BigInt(28)});
  CHECK(c1[1] == SqrtThreeInt{BigInt(0), BigInt(91)});
  CHECK(c1[2] == SqrtThreeInt{BigInt(0), BigInt(112)});
  CHECK(c1[3] == SqrtThreeInt{BigInt(0), BigInt(84)});
  CHECK(c1[4] == SqrtThreeInt{BigInt(0), BigInt(28)});
  CHECK_THROWS_AS(quartic_coefficients(-1), std::invalid_argument);
}

TEST_CASE("quartic coefficients reproduce the factored lower bound exactly") {
  // Two polynomials of degree <= 5 in d1 that agree at 7 points are identical.
  for (std::int64_t n : {0, 1, 2, 3, 7, 40, 999, 123456, 1000000}) {
    const auto coeffs = quartic_coefficients(n);
    for (std::int64_t d1 = 32; d1 < 39; ++d1) {
      SqrtThreeInt horner = coeffs[0];
      for (int k = 1; k < 5; ++k) horner = horner * SqrtThreeInt::integer(BigInt(d1)) + coeffs[k];
      CHECK(horner == oracle::quartic_from_factored(d1, n));
    }
  }
}

TEST_CASE("floating coefficients match the exact ones at L = 7") {
  const double L = 7.0;
  const double K = k_for(L);
  for (double n : {1.0, 5.0, 100.0}) {
    const auto exact = quartic_coefficients(static_cast<std::int64_t>(n));
    const auto approx = quartic_coefficients_numeric(n, L, K);
    for (int k = 0; k < 5; ++k) CHECK(approx[k] == doctest::Approx(exact[k].approx()).epsilon(1e-12));
  }
}

TEST_CASE("coefficients at n = 0 and a small exact certificate") {
  // For n = 0 (same ring) the leading coefficient is 56 - 32 sqrt3 > 0 and
  // lower ones vanish; the certificate must accept it.
  CHECK(sqrt3_sign(quartic_coefficients(0)[0]) == Sign::positive);
  const QuarticCertificate cert = certify_quartic(20000, 2);
  CHECK(cert.ok());
  CHECK(cert.coefficients_checked == 5 * 20001);
}

TEST_CASE("closed forms match direct vector evaluation") {
  CounterRng rng(17, 0);
  const double L = 7.0, K = k_for(L);
  for (int trial = 0; trial < 500; ++trial) {
    const int d1 = 32 + static_cast<int>(rng.below(200));
    const int d2 = d1 + static_cast<int>(rng.below(5));
    const RingIndex a{d1, ring_exponent(d1), 1 + static_cast<int>(rng.below(6 << ring_exponent(d1)))};
    const RingIndex b{d2, ring_exponent(d2), 1 + static_cast<int>(rng.below(6 << ring_exponent(d2)))};
    if (a == b) continue;
    const double ta = ring_angle(a), tb = ring_angle(b);
    const Vec3 A{d1 * std::cos(ta), d1 * std::sin(ta), 0};
    const Vec3 B{d2 * std::cos(tb), d2 * std::sin(tb), 0};
    const Vec3 u{A.y, -A.x, K * d1 + L};
    const Vec3 v{B.y, -B.x, K * d2 + L};
    const PairGeometry g = PairGeometry::from_ring_points(a, b, L);
    const Vec3 c = cross(u, v);
    const double scale = norm(B - A) * norm(u) * norm(v);
    CHECK(triple_product(g) == doctest::Approx(dot(B - A, c)).epsilon(1e-9).scale(scale));
    CHECK(cross_norm_sq(g) == doctest::Approx(norm_sq(c)).epsilon(1e-9).scale(norm_sq(u) * norm_sq(v)));
    const double tp = triple_product(g);
    const double dl = delta(g);
    CHECK(tp * tp - cross_norm_sq(g) == doctest::Approx(dl).epsilon(1e-9).scale(tp * tp));
    if (angle_between(a, b) > 0 || d1 != d2) {
      const double dist = oracle::line_distance(A, u, B, v);
      CHECK(dist >= 1.0 - 1e-9);
      CHECK(std::abs(tp) / std::sqrt(cross_norm_sq(g)) == doctest::Approx(dist).epsilon(1e-9));
    }
  }
}

TEST_CASE("delta vanishes for radial neighbours at the same angle") {
  const PairGeometry g = PairGeometry::from_ring_points({40, 5, 7}, {41, 5, 7});
  CHECK(g.one_minus_c == 0.0);
  CHECK(delta(g) == doctest::Approx(0.0));
  CHECK(triple_product(g) == doctest::Approx(7.0));  // L (d2 - d1)^2
  CHECK_THROWS_AS(delta_prime(g), std::domain_error);
}

TEST_CASE("delta' is positive on ring pairs with distinct angles") {
  CounterRng rng(23, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d1 = 32 + static_cast<int>(rng.below(2000));
    const int d2 = d1 + static_cast<int>(rng.below(4));
    const int m1 = ring_exponent(d1), m2 = ring_exponent(d2);
    const RingIndex a{d1, m1, 1 + static_cast<int>(rng.below(6 << m1))};
    const RingIndex b{d2, m2, 1 + static_cast<int>(rng.below(6 << m2))};
    const PairGeometry g = PairGeometry::from_ring_points(a, b);
    if (g.one_minus_c == 0.0) continue;
    CHECK(delta_prime(g) > 0.0);
    CHECK(delta(g) >= -1e-6 * std::pow(d2, 4) * 49.0);
  }
}

TEST_CASE("the dropped term L^2 n^2 (n^2 - 1) is a nonnegative integer multiple of L^2") {
  for (std::int64_t n = 0; n < 1000; ++n) CHECK(n * n * (n * n - 1) >= 0);
}

TEST_CASE("phi: value at 32, limit, and monotonicity") {
  // 2 * 32^4 / 33^2 * (1 - cos(pi/96)), evaluated to 30 digits elsewhere.
  CHECK(cos_lemma_phi(32) == doctest::Approx(1.0310757068547).epsilon(1e-11));
  CHECK(cos_lemma_phi(32) > 1.03);
  CHECK(std::abs(cos_lemma_phi(1e6) - std::numbers::pi * std::numbers::pi / 9) < 1e-4);
  const auto grid = geometric_grid(32, 1e6, 500);
  CHECK(grid.front() == 32);
  CHECK(grid.back() == doctest::Approx(1e6));
  const CosLemmaReport rep = check_cos_lemma(grid);
  CHECK(rep.ok());
  CHECK_FALSE(rep.first_failure_x.has_value());
  CHECK_THROWS_AS(check_cos_lemma(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(check_cos_lemma(std::vector<double>{16, 32}), std::invalid_argument);
}

TEST_CASE("cos lemma check reports the first failing grid point") {
  const auto grid = geometric_grid(32, 1000, 50);
  const CosLemmaReport rep = check_cos_lemma(grid, 1.05);
  CHECK_FALSE(rep.ok());
  REQUIRE(rep.first_failure_x);
  CHECK(*rep.first_failure_x == 32);
}

TEST_CASE("gap bound at the minimal angular step") {
  const GapBoundReport rep = check_one_minus_c_bound(32, 4096);
  CHECK(rep.ok());
  CHECK(rep.checked == 4096 - 32 + 1);
  CHECK(rep.min_ratio > 1.0);
  // 1 - cos(pi/96) against (49/48) * 33^2 / (2 * 32^4)
  CHECK(one_minus_c_lower_bound(32) == doctest::Approx(49.0 / 48.0 * 33 * 33 / (2.0 * std::pow(32.0, 4))));
}

TEST_CASE("gap bound on explicit pairs skips equal angles") {
  std::vector<std::pair<RingIndex, RingIndex>> pairs{
      {{40, 5, 1}, {41, 5, 1}},
      {{40, 5, 1}, {41, 5, 2}},
      {{63, 5, 10}, {64, 6, 21}},
  };
  const GapBoundReport rep = check_one_minus_c_bound(pairs);
  CHECK(rep.skipped_same_angle == 1);
  CHECK(rep.checked == 2);
  CHECK(rep.ok());
}

TEST_CASE("lemma 1 certificate on random separated sets") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pts = random_separated_points(10.0, 1.0, 1500, seed);
    double R = 0;
    for (const auto& p : pts) R = std::max(R, p.radial());
    const double T = std::pow(R, 4) / 2.0;  // R^4 / (8 r^2) with r = 1/2
    const Lemma1Report rep = lemma1_certificate(pts, 0.5, T);
    CHECK(rep.ok());
    CHECK(rep.min_distance >= rep.distance_bound - 1e-9);
    CHECK(rep.distance_bound == doctest::Approx(1.0 - 1.0 / T));
  }
}

TEST_CASE("lemma 1 certificate flags a too-small T") {
  const auto pts = random_separated_points(10.0, 1.0, 1500, 3);
  const Lemma1Report rep = lemma1_certificate(pts, 0.5, 10.0);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.precondition_failures.empty());
}

TEST_CASE("identity suite is deterministic and within tolerance") {
  const IdentityReport a = check_boxed_identities(20000, 42, 4096, 7.0, 1);
  const IdentityReport b = check_boxed_identities(20000, 42, 4096, 7.0, 3);
  CHECK(a.pairs == 20000);
  CHECK(a.max_triple_rel_err == b.max_triple_rel_err);
  CHECK(a.max_triple_rel_err <= 1e-9);
  CHECK(a.max_cross_rel_err <= 1e-9);
  CHECK(a.max_delta_rel_err <= 1e-6);
  CHECK(a.min_delta_scaled >= -1e-6);
  CHECK(a.min_distance >= 1.0 - 1e-9);
}
