#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cylpack/point_lattice.hpp"
#include "cylpack/vec3.hpp"

namespace cylpack {

enum class FamilyKind { perpendicular, local, global };

std::string_view to_string(FamilyKind kind);
/// Accepts "perp", "perpendicular", "local", "global".
std::optional<FamilyKind> parse_family_kind(std::string_view s);

/// The slope constant used by the global construction unless overridden.
inline constexpr double kDefaultL = 7.0;
/// Smallest admissible L; keeps L^2/K^2 < 1.03 and K < L < 2K.
inline constexpr double kMinL = 6.0;

/// Construction constants. Local families set r, eps and T = 1/eps; global
/// families set L and K = sqrt(L^2 - 1).
struct FamilyParams {
  std::optional<double> r;
  std::optional<double> eps;
  std::optional<double> T;
  std::optional<double> L;
  std::optional<double> K;
  /// Global family built from points outside the ring set; no certificate applies.
  bool unsafe = false;
};

/// A finite truncation of a cylinder packing: one axis per base point and a common radius.
struct CylinderFamily {
  FamilyKind kind = FamilyKind::perpendicular;
  double radius = 0.0;
  FamilyParams params;
  std::vector<Line> lines;
  std::vector<PlanarPoint> base_points;

  std::size_t size() const { return lines.size(); }
  /// Largest base point radius (the ring radius for ring points), 0 when empty.
  double max_radial() const;
};

/// K = sqrt(L^2 - 1).
double k_for(double L);

/// Tangent of the elevation of a global-construction axis through a point at
/// distance d from the origin: K + L/d.
double beta(double d, double L = kDefaultL);

/// 8 r^2 / R^4 with R the largest point radius: the largest tilt parameter for
/// which the local construction stays a packing.
double local_eps_max(std::span<const PlanarPoint> points, double r);

/// Vertical axes through every point. Requires pairwise point distance >= 2*radius.
CylinderFamily perpendicular_family(std::span<const PlanarPoint> points, double radius);

/// Axes through A_i with direction <y_i, -x_i, 1/eps>, radius r(1 - eps).
/// eps defaults to local_eps_max(points, r).
CylinderFamily local_family(std::span<const PlanarPoint> points, double r, std::optional<double> eps = {});

/// Axes through ring points with direction <y_i, -x_i, K d_i + L>, radius 1/2.
/// Points without ring provenance are rejected unless `unsafe` is set.
CylinderFamily global_family(std::span<const PlanarPoint> points, double L = kDefaultL, bool unsafe = false);

}  // namespace cylpack
