#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cylpack/line_families.hpp"
#include "cylpack/point_lattice.hpp"
#include "cylpack/sqrt3_int.hpp"

namespace cylpack {

/// Two base points of the global construction reduced to what the distance
/// algebra needs: their radii, the cosine of the angle A1 O A2 and the slope
/// constants. `one_minus_c` is kept separately so that 1 - c stays accurate
/// when c is close to 1.
struct PairGeometry {
  double d1 = 0.0;
  double d2 = 0.0;
  double c = 1.0;
  double one_minus_c = 0.0;
  double L = kDefaultL;
  double K = 0.0;

  static PairGeometry from_cos(double d1, double d2, double c, double L = kDefaultL);
  static PairGeometry from_ring_points(const RingIndex& a, const RingIndex& b, double L = kDefaultL);
};

/// A1A2 . (v1 x v2) = (1-c) d1 d2 (K d1 + K d2 + 2L) + L (d2 - d1)^2
double triple_product(const PairGeometry& g);

/// |v1 x v2|^2 = -(1-c)^2 d1^2 d2^2 + 2(1-c) d1 d2 [L^2 (1 + d1 d2) + K L (d1 + d2)] + L^2 (d2 - d1)^2
double cross_norm_sq(const PairGeometry& g);

/// triple_product^2 - cross_norm_sq, expanded in powers of 1 - c.
double delta(const PairGeometry& g);

/// The lower bound of delta with the (d2-d1)^2[(d2-d1)^2-1] term dropped,
/// divided by 2(1-c) d1 d2. Throws std::domain_error when c == 1.
double delta_prime(const PairGeometry& g);

/// Coefficients of d1^4, d1^3, ..., d1^0 of the quartic that bounds delta'
/// from below (times 4 (d1+n)^3 / L), for d2 = d1 + n, L = 7, K = 4 sqrt(3).
std::array<SqrtThreeInt, 5> quartic_coefficients(std::int64_t n);

/// Same coefficients for general (L, K) in floating point.
std::array<double, 5> quartic_coefficients_numeric(double n, double L, double K);

struct QuarticCertificate {
  std::int64_t n_max = 0;
  std::uint64_t coefficients_checked = 0;
  /// (n, degree) of the first negative coefficient, if any.
  std::optional<std::pair<std::int64_t, int>> first_negative;
  double runtime_ms = 0.0;

  bool ok() const { return !first_negative && coefficients_checked == 5 * static_cast<std::uint64_t>(n_max + 1); }
};

/// Exact sign check of all five coefficients for n = 0..n_max.
QuarticCertificate certify_quartic(std::int64_t n_max, unsigned threads = 0);

/// phi(x) = 2x^4/(x+1)^2 * (1 - cos(pi/(3x))).
double cos_lemma_phi(double x);

/// `count` points geometrically spaced over [lo, hi], both ends included.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

struct CosLemmaReport {
  std::vector<double> x;
  std::vector<double> phi;
  double bound = 1.03;
  bool above_bound = true;
  bool nondecreasing = true;
  std::optional<double> first_failure_x;
  /// |phi(last x) - pi^2/9|
  double limit_gap = 0.0;

  bool ok() const { return above_bound && nondecreasing; }
};

/// Evaluates phi on the grid and checks phi > bound and monotonicity.
/// Throws std::invalid_argument if the grid is empty or reaches below 32.
CosLemmaReport check_cos_lemma(std::span<const double> x_grid, double bound = 1.03);

struct GapBoundFailure {
  int d1 = 0;
  int d2 = 0;
  double one_minus_c = 0.0;
  double bound = 0.0;
};

struct GapBoundReport {
  std::uint64_t checked = 0;
  std::uint64_t skipped_same_angle = 0;
  /// Smallest (1-c) / bound seen.
  double min_ratio = 0.0;
  std::vector<GapBoundFailure> failures;

  bool ok() const { return failures.empty() && checked > 0; }
};

/// (L^2/K^2) (d2+1)^2 / (2 d2^4)
double one_minus_c_lower_bound(double d2, double L = kDefaultL);

/// Checks 1 - c >= one_minus_c_lower_bound(d2) at the smallest angular gap
/// pi/(3*2^m) of every ring d2 in [d2_lo, d2_hi].
GapBoundReport check_one_minus_c_bound(int d2_lo, int d2_hi, double L = kDefaultL);

/// Same inequality for explicit ring-point pairs; pairs at equal angle are skipped.
GapBoundReport check_one_minus_c_bound(std::span<const std::pair<RingIndex, RingIndex>> pairs, double L = kDefaultL);

struct Lemma1Failure {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string what;
  double value = 0.0;
};

struct Lemma1Report {
  std::uint64_t pairs = 0;
  double R = 0.0;
  double r = 0.0;
  double T = 0.0;
  double distance_bound = 0.0;
  double min_distance = 0.0;
  double max_triple_rel_err = 0.0;
  double max_cross_rel_err = 0.0;
  std::vector<std::string> precondition_failures;
  std::vector<Lemma1Failure> failures;

  bool ok() const { return precondition_failures.empty() && failures.empty(); }
};

/// For axes <y_i, -x_i, T> through each point: checks the closed forms
/// T |A1A2|^2 and T^2 |A1A2|^2 + (1-c^2) d1^2 d2^2 against direct evaluation
/// and checks every axis distance against 2r(1 - 1/T). R defaults to the
/// largest point radius.
Lemma1Report lemma1_certificate(std::span<const PlanarPoint> points, double r, double T,
                                std::optional<double> R = std::nullopt, double rel_tol = 1e-9,
                                double slack = 1e-9);

struct IdentityReport {
  std::uint64_t pairs = 0;
  double max_triple_rel_err = 0.0;
  double max_cross_rel_err = 0.0;
  double max_delta_rel_err = 0.0;
  /// min over pairs of delta / (d2^4 L^2)
  double min_delta_scaled = 0.0;
  double min_delta_prime = 0.0;
  double min_distance = 0.0;
};

/// Compares the closed forms above with direct vector evaluation on seeded
/// random ring-point pairs with d <= r_max (a mix of uniform pairs, same-ring
/// neighbours and radial neighbours).
IdentityReport check_boxed_identities(std::uint64_t pair_count, std::uint64_t seed, int r_max = 4096,
                                      double L = kDefaultL, unsigned threads = 0);

}  // namespace cylpack
