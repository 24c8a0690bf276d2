#include "cylpack/sqrt3_int.hpp"

#include <cmath>

namespace cylpack {

std::string to_string(Sign s) {
  switch (s) {
    case Sign::negative: return "negative";
    case Sign::zero: return "zero";
    case Sign::positive: return "positive";
  }
  return "unknown";
}

double SqrtThreeInt::approx() const { return a.convert_to<double>() * std::sqrt(3.0) + b.convert_to<double>(); }

Sign sqrt3_sign(const SqrtThreeInt& v) {
  const int sa = v.a.sign();
  const int sb = v.b.sign();
  if (sa == 0 && sb == 0) return Sign::zero;
  if (sa >= 0 && sb >= 0) return Sign::positive;
  if (sa <= 0 && sb <= 0) return Sign::negative;
  // Mixed signs. sqrt(3) is irrational, so 3a^2 == b^2 cannot happen here.
  const BigInt lhs = 3 * v.a * v.a;
  const BigInt rhs = v.b * v.b;
  const bool a_dominates = lhs > rhs;
  if (sa > 0) return a_dominates ? Sign::positive : Sign::negative;
  return a_dominates ? Sign::negative : Sign::positive;
}

}  // namespace cylpack
