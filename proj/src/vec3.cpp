#include "cylpack/vec3.hpp"

#include <stdexcept>

namespace cylpack {

bool is_finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

Line::Line(const Vec3& base, const Vec3& dir) : base_(base), dir_(dir) {
  if (!is_finite(base_) || !is_finite(dir_)) {
    throw std::invalid_argument("Line: non-finite base or direction");
  }
  if (norm_sq(dir_) == 0.0) {
    throw std::invalid_argument("Line: zero direction vector");
  }
}

double line_distance(const Line& l1, const Line& l2, double parallel_tol) {
  const Vec3 offset = l2.base() - l1.base();
  const Vec3 c = cross(l1.dir(), l2.dir());
  const double cn = norm(c);
  const double scale = norm(l1.dir()) * norm(l2.dir());
  if (cn > parallel_tol * scale) {
    return std::abs(dot(offset, c)) / cn;
  }
  return norm(cross(offset, l1.dir())) / norm(l1.dir());
}

double point_line_distance(const Vec3& p, const Line& l) {
  return norm(cross(p - l.base(), l.dir())) / norm(l.dir());
}

double elevation_angle(const Line& l) {
  const Vec3& v = l.dir();
  return std::atan2(std::abs(v.z), std::hypot(v.x, v.y));
}

bool are_parallel(const Line& l1, const Line& l2, double tol) {
  return norm(cross(l1.dir(), l2.dir())) <= tol * norm(l1.dir()) * norm(l2.dir());
}

}  // namespace cylpack
