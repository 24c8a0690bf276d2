#pragma once

#include <cmath>

namespace cylpack {

/// Point or vector in 3-space.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& u, const Vec3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; }

constexpr Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

constexpr double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }

bool is_finite(const Vec3& v);

/// Default tolerances of the floating point geometry path.
struct GeometryTolerances {
  /// Relative bound on |u x v| / (|u| |v|) under which two directions count as parallel.
  double parallel = 1e-12;
  /// Absolute slack used when a computed distance is compared to a threshold.
  double distance_slack = 1e-9;
};

inline constexpr GeometryTolerances kDefaultTolerances{};

/// Axis of a cylinder: a point on the line and an (unnormalized) direction.
///
/// Directions are stored as given. The constructions in this library build
/// direction vectors whose components are exact functions of the base point
/// (e.g. <y, -x, T>), and normalizing them would destroy the exact
/// orthogonality dir . (x, y, 0) == 0.
class Line {
 public:
  /// Throws std::invalid_argument for a zero or non-finite direction, or a non-finite base.
  Line(const Vec3& base, const Vec3& dir);

  const Vec3& base() const { return base_; }
  const Vec3& dir() const { return dir_; }

 private:
  Vec3 base_;
  Vec3 dir_;
};

/// Distance between two lines.
///
/// Skew (or intersecting) lines use |A1A2 . (v1 x v2)| / |v1 x v2|. When the
/// directions are parallel within `parallel_tol` the distance falls back to
/// |A1A2 x v1| / |v1|, so the function is total.
double line_distance(const Line& l1, const Line& l2, double parallel_tol = kDefaultTolerances.parallel);

/// Distance from a point to a line.
double point_line_distance(const Vec3& p, const Line& l);

/// Angle between the line and the xy plane, in [0, pi/2].
double elevation_angle(const Line& l);

/// True iff |dir1 x dir2| <= tol * |dir1| * |dir2|.
bool are_parallel(const Line& l1, const Line& l2, double tol = kDefaultTolerances.parallel);

}  // namespace cylpack
