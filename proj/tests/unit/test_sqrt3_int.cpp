#include <doctest.h>

#include <cmath>

#include "cylpack/random.hpp"
#include "cylpack/sqrt3_int.hpp"

using namespace cylpack;

namespace {

SqrtThreeInt S(long long a, long long b) { return {BigInt(a), BigInt(b)}; }

}  // namespace

TEST_CASE("sign of simple values") {
  CHECK(sqrt3_sign(S(0, 0)) == Sign::zero);
  CHECK(sqrt3_sign(S(1, 0)) == Sign::positive);
  CHECK(sqrt3_sign(S(0, -1)) == Sign::negative);
  CHECK(sqrt3_sign(S(1, -1)) == Sign::positive);   // 1.732 - 1
  CHECK(sqrt3_sign(S(1, -2)) == Sign::negative);   // 1.732 - 2
  CHECK(sqrt3_sign(S(-1, 2)) == Sign::positive);
  CHECK(sqrt3_sign(S(-4, 7)) == Sign::positive);   // 7 - 6.928
  CHECK(sqrt3_sign(S(4, -7)) == Sign::negative);
}

TEST_CASE("sign near sqrt(3) convergents") {
  // 1351/780 is a convergent of sqrt(3): 3 * 780^2 - 1351^2 = -1.
  CHECK(sqrt3_sign(S(780, -1351)) == Sign::negative);
  CHECK(sqrt3_sign(S(-780, 1351)) == Sign::positive);
  // 97/56: 3 * 56^2 - 97^2 = -1, so 56 sqrt3 < 97.
  CHECK(sqrt3_sign(S(56, -97)) == Sign::negative);
  // 265/153: 3 * 153^2 - 265^2 = 2, so 153 sqrt3 > 265.
  CHECK(sqrt3_sign(S(153, -265)) == Sign::positive);
}

TEST_CASE("sign of huge values is exact") {
  BigInt big = 1;
  for (int i = 0; i < 40; ++i) big *= 10;  // 1e40
  // s = floor(10^40 sqrt 3) lies just below 10^40 sqrt 3 and s + 1 just above.
  const BigInt s = boost::multiprecision::sqrt(BigInt(3 * big * big));
  CHECK(sqrt3_sign({big, -s}) == Sign::positive);
  CHECK(sqrt3_sign({big, -(s + 1)}) == Sign::negative);
  CHECK(sqrt3_sign({-big, s}) == Sign::negative);
}

TEST_CASE("sign agrees with long double evaluation on small random values") {
  CounterRng rng(5, 0);
  for (int i = 0; i < 20000; ++i) {
    const long long a = static_cast<long long>(rng.below(2001)) - 1000;
    const long long b = static_cast<long long>(rng.below(2001)) - 1000;
    const long double v = a * std::sqrt(3.0L) + b;
    const Sign s = sqrt3_sign(S(a, b));
    if (a == 0 && b == 0) {
      CHECK(s == Sign::zero);
    } else if (v > 0) {
      CHECK(s == Sign::positive);
    } else {
      CHECK(s == Sign::negative);
    }
  }
}

TEST_CASE("ring arithmetic") {
  const SqrtThreeInt u = S(2, 3);
  const SqrtThreeInt v = S(-1, 5);
  CHECK(u + v == S(1, 8));
  CHECK(u - v == S(3, -2));
  CHECK(-u == S(-2, -3));
  // (2r+3)(-r+5) = -2*3 + 10r - 3r + 15 = 7r + 9
  CHECK(u * v == S(7, 9));
  // Conjugate product is rational.
  CHECK(S(5, 7) * S(-5, 7) == S(0, 49 - 75));
  CHECK((u * v).approx() == doctest::Approx((2 * std::sqrt(3.0) + 3) * (-std::sqrt(3.0) + 5)));
  CHECK(to_string(Sign::negative) == "negative");
}
