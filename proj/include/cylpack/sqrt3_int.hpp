#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace cylpack {

using BigInt = boost::multiprecision::cpp_int;

enum class Sign { negative = -1, zero = 0, positive = 1 };

std::string to_string(Sign s);

/// Exact value a*sqrt(3) + b with integer a, b.
struct SqrtThreeInt {
  BigInt a;
  BigInt b;

  SqrtThreeInt() = default;
  SqrtThreeInt(BigInt a_, BigInt b_) : a(std::move(a_)), b(std::move(b_)) {}

  friend SqrtThreeInt operator+(const SqrtThreeInt& u, const SqrtThreeInt& v) { return {u.a + v.a, u.b + v.b}; }
  friend SqrtThreeInt operator-(const SqrtThreeInt& u, const SqrtThreeInt& v) { return {u.a - v.a, u.b - v.b}; }
  friend SqrtThreeInt operator-(const SqrtThreeInt& u) { return {-u.a, -u.b}; }
  // (a1 r + b1)(a2 r + b2) = (a1 b2 + a2 b1) r + (3 a1 a2 + b1 b2), r = sqrt(3)
  friend SqrtThreeInt operator*(const SqrtThreeInt& u, const SqrtThreeInt& v) {
    return {u.a * v.b + v.a * u.b, 3 * u.a * v.a + u.b * v.b};
  }
  friend bool operator==(const SqrtThreeInt& u, const SqrtThreeInt& v) { return u.a == v.a && u.b == v.b; }

  static SqrtThreeInt integer(BigInt v) { return {BigInt(0), std::move(v)}; }

  /// Nearest double; for display only.
  double approx() const;
};

/// Exact sign of a*sqrt(3) + b using integer arithmetic only. Mixed-sign
/// components are settled by comparing 3a^2 with b^2.
Sign sqrt3_sign(const SqrtThreeInt& v);

}  // namespace cylpack
