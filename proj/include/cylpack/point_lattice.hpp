#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cylpack {

/// First ring radius of the ring set.
inline constexpr int kFirstRing = 32;

/// Integer provenance of a ring-set point: radius d, ring exponent m
/// (2^m <= d < 2^(m+1)) and angular index k in 1..6*2^m.
struct RingIndex {
  int d = 0;
  int m = 0;
  int k = 0;

  std::int64_t ring_count() const { return std::int64_t{6} << m; }
  bool operator==(const RingIndex&) const = default;
};

/// A base point in the xy plane. Points produced by ring()/build_set() carry
/// their RingIndex; arbitrary points (e.g. for the local construction) do not.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<RingIndex> ring;

  /// Integer radius for ring points, Euclidean norm otherwise.
  double radial() const;
};

struct RingParams {
  int d = 0;
  int m = 0;
  double theta = 0.0;  // angular step pi / (3 * 2^m)
  std::int64_t count = 0;
};

struct Ring {
  RingParams params;
  std::vector<PlanarPoint> points;
};

/// Position of the highest set bit of d; computed on integers so that
/// d = 2^m lands in block m exactly.
int ring_exponent(int d);

/// Angle k*theta of a ring point, reduced to [0, 2*pi).
double ring_angle(const RingIndex& idx);

/// Angle A1 O A2 in [0, pi], computed from the exact rational turn fractions
/// k1/(6*2^m1) and k2/(6*2^m2) rather than from rounded coordinates.
double angle_between(const RingIndex& a, const RingIndex& b);

/// 1 - cos(angle_between(a, b)), evaluated as 2 sin^2(angle / 2).
double one_minus_cos_between(const RingIndex& a, const RingIndex& b);

/// The 6*2^m points of ring d, k = 1..6*2^m. Throws std::invalid_argument for d < 32.
Ring ring(int d);

/// Union of ring(d) for 32 <= d <= r_max, ordered by (d, k).
std::vector<PlanarPoint> build_set(int r_max);

/// |build_set(r_max)| without materializing the points.
std::int64_t count_up_to(int r_max);

/// 2^(2m+1) + 6*2^m - 2^11, the number of ring points in the disk of radius 2^m.
std::int64_t closed_form_count(int m);

/// Exact minimum pairwise distance, found with a uniform grid hash.
/// Throws std::invalid_argument for fewer than two points.
double min_pair_distance_points(std::span<const PlanarPoint> points);

/// |ring points in D(r_max)| / (pi r_max^2).
double point_density(int r_max);

/// Seeded dart throwing: `attempts` uniform candidates in the open disk of
/// radius disk_radius, each kept if it is at distance >= separation from all
/// points kept so far. The result carries no ring provenance.
std::vector<PlanarPoint> random_separated_points(double disk_radius, double separation, std::size_t attempts,
                                                 std::uint64_t seed);

}  // namespace cylpack
