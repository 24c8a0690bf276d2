#include "cylpack/line_families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cylpack {

namespace {

constexpr double kSeparationSlack = 1e-9;

void require_separation(std::span<const PlanarPoint> points, double min_sep, const char* what) {
  if (points.size() < 2) return;
  const double got = min_pair_distance_points(points);
  if (got < min_sep - kSeparationSlack) {
    throw std::invalid_argument(std::string(what) + ": points closer than " + std::to_string(min_sep) +
                                " (minimum pair distance " + std::to_string(got) + ")");
  }
}

bool is_valid_ring_point(const PlanarPoint& p) {
  if (!p.ring) return false;
  const RingIndex& idx = *p.ring;
  if (idx.d < kFirstRing || idx.m != ring_exponent(idx.d)) return false;
  if (idx.k < 1 || idx.k > idx.ring_count()) return false;
  const double d = idx.d;
  return std::abs(p.x * p.x + p.y * p.y - d * d) <= 1e-9 * d * d;
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::perpendicular: return "perp";
    case FamilyKind::local: return "local";
    case FamilyKind::global: return "global";
  }
  return "unknown";
}

std::optional<FamilyKind> parse_family_kind(std::string_view s) {
  if (s == "perp" || s == "perpendicular") return FamilyKind::perpendicular;
  if (s == "local") return FamilyKind::local;
  if (s == "global") return FamilyKind::global;
  return std::nullopt;
}

double CylinderFamily::max_radial() const {
  double r = 0.0;
  for (const auto& p : base_points) r = std::max(r, p.radial());
  return r;
}

double k_for(double L) {
  if (!(L >= 1.0)) throw std::invalid_argument("k_for: L must be >= 1");
  return std::sqrt(L * L - 1.0);
}

double beta(double d, double L) {
  if (!(d > 0.0)) throw std::invalid_argument("beta: d must be positive");
  if (!(L >= kMinL)) throw std::invalid_argument("beta: L must be >= 6");
  return k_for(L) + L / d;
}

double local_eps_max(std::span<const PlanarPoint> points, double r) {
  if (points.empty()) throw std::invalid_argument("local_eps_max: no points");
  double big_r = 0.0;
  for (const auto& p : points) big_r = std::max(big_r, p.radial());
  if (big_r == 0.0) throw std::invalid_argument("local_eps_max: all points at the origin");
  const double r2 = big_r * big_r;
  return 8.0 * r * r / (r2 * r2);
}

CylinderFamily perpendicular_family(std::span<const PlanarPoint> points, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("perpendicular_family: radius must be positive");
  require_separation(points, 2.0 * radius, "perpendicular_family");
  CylinderFamily fam;
  fam.kind = FamilyKind::perpendicular;
  fam.radius = radius;
  fam.params.r = radius;
  fam.base_points.assign(points.begin(), points.end());
  fam.lines.reserve(points.size());
  for (const auto& p : points) fam.lines.emplace_back(Vec3{p.x, p.y, 0.0}, Vec3{0.0, 0.0, 1.0});
  return fam;
}

CylinderFamily local_family(std::span<const PlanarPoint> points, double r, std::optional<double> eps) {
  if (!(r > 0.0)) throw std::invalid_argument("local_family: r must be positive");
  if (points.empty()) throw std::invalid_argument("local_family: no points");
  for (const auto& p : points) {
    // The direction <y, -x, T> degenerates to vertical at the origin.
    if (p.x == 0.0 && p.y == 0.0) throw std::invalid_argument("local_family: point at the origin");
  }
  const double eps_max = local_eps_max(points, r);
  double e = eps.value_or(eps_max);
  // eps = 1/T with T = R^4/(8r^2) can land a few ulps above the bound.
  if (e > eps_max && e <= eps_max * (1.0 + 1e-12)) e = eps_max;
  if (!(e > 0.0) || e > eps_max) {
    throw std::invalid_argument("local_family: eps must lie in (0, 8r^2/R^4] = (0, " + std::to_string(eps_max) +
                                "], got " + std::to_string(e));
  }
  require_separation(points, 2.0 * r, "local_family");

  CylinderFamily fam;
  fam.kind = FamilyKind::local;
  fam.radius = r * (1.0 - e);
  fam.params.r = r;
  fam.params.eps = e;
  fam.params.T = 1.0 / e;
  fam.base_points.assign(points.begin(), points.end());
  fam.lines.reserve(points.size());
  const double t = 1.0 / e;
  for (const auto& p : points) fam.lines.emplace_back(Vec3{p.x, p.y, 0.0}, Vec3{p.y, -p.x, t});
  return fam;
}

CylinderFamily global_family(std::span<const PlanarPoint> points, double L, bool unsafe) {
  if (!(L >= kMinL)) throw std::invalid_argument("global_family: L must be >= 6, got " + std::to_string(L));
  const double k = k_for(L);
  CylinderFamily fam;
  fam.kind = FamilyKind::global;
  fam.radius = 0.5;
  fam.params.L = L;
  fam.params.K = k;
  fam.params.unsafe = unsafe;
  fam.base_points.assign(points.begin(), points.end());
  fam.lines.reserve(points.size());
  for (const auto& p : points) {
    if (!unsafe && !is_valid_ring_point(p)) {
      throw std::invalid_argument("global_family: point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                  ") is not a ring-set point with integer d >= 32");
    }
    const double d = p.radial();
    fam.lines.emplace_back(Vec3{p.x, p.y, 0.0}, Vec3{p.y, -p.x, k * d + L});
  }
  return fam;
}

}  // namespace cylpack
