#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cylpack/line_families.hpp"

namespace cylpack {

/// Monte Carlo estimate of the fraction of the ball B(R) covered by a family.
///
/// Samples are stratified over horizontal slabs of the ball with proportional
/// allocation; `std_error` is the stratified binomial standard error
/// sqrt(sum_s w_s^2 p_s (1 - p_s) / n_s), which never exceeds sqrt(p(1-p)/N).
struct DensityEstimate {
  double R = 0.0;
  double covered_volume = 0.0;
  double density = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  FamilyKind family_kind = FamilyKind::perpendicular;
};

inline constexpr std::uint64_t kMinDensitySamples = 10'000;

double ball_volume(double R);

/// Estimates Vol(union of cylinders within B(R)). Deterministic in
/// (family, R, samples, seed); the worker count does not affect the result.
/// Throws std::invalid_argument for R <= 0 or samples < 10^4.
DensityEstimate covered_volume(const CylinderFamily& family, double R, std::uint64_t samples, std::uint64_t seed,
                               unsigned threads = 0);

/// Local density delta(C, R); same estimate as covered_volume().
DensityEstimate local_density(const CylinderFamily& family, double R, std::uint64_t samples, std::uint64_t seed,
                              unsigned threads = 0);

/// Per-cylinder estimates of Vol(C_i within B(R)) from one sampling pass.
struct CylinderVolumes {
  std::vector<double> volume;
  std::vector<double> variance;
  DensityEstimate total;
};

/// `stream` selects an independent family of random streams under the same seed.
CylinderVolumes per_cylinder_volumes(const CylinderFamily& family, double R, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads = 0, std::uint64_t stream = 0);

struct CongruenceReport {
  FamilyKind kind = FamilyKind::local;
  double R = 0.0;
  std::size_t cylinders = 0;
  /// Per-cylinder |V_i - V_i_perp| / sqrt(var_i + var_i_perp); 0 when both are exactly equal.
  std::vector<double> z_scores;
  std::vector<std::size_t> failing;
  double max_z = 0.0;
  double aggregate_z = 0.0;
  double per_cylinder_sigma = 4.0;
  double aggregate_sigma = 2.0;
  DensityEstimate tilted;
  DensityEstimate perpendicular;

  bool per_cylinder_ok() const { return failing.empty(); }
  bool aggregate_ok() const { return aggregate_z <= aggregate_sigma; }
  bool ok() const { return per_cylinder_ok() && aggregate_ok(); }
};

/// Compares Vol(C_i within B(R)) of each tilted cylinder with its vertical
/// counterpart, using independent random streams for the two families.
/// kind == local: `param` is eps (default the largest admissible), radius r(1-eps).
/// kind == global: `param` is L (default 7), radius 1/2; r is ignored.
CongruenceReport congruence_check(std::span<const PlanarPoint> points, double r, std::optional<double> param,
                                  FamilyKind kind, double R, std::uint64_t samples, std::uint64_t seed,
                                  unsigned threads = 0);

struct SeriesRow {
  int R = 0;
  double point_density = 0.0;
  /// point_density(R) * pi / 4: the product-law prediction for radius 1/2.
  double product_law = 0.0;
  DensityEstimate perpendicular;
  DensityEstimate tilted;
  /// |tilted - perpendicular| / sqrt(se_t^2 + se_p^2)
  double congruence_z = 0.0;
};

/// Density of the vertical and the global (tilted) family over build_set(R)
/// for each R. Throws std::invalid_argument unless R_list is increasing with R >= 64.
std::vector<SeriesRow> global_density_series(std::span<const int> R_list, std::uint64_t samples, std::uint64_t seed,
                                             double L = kDefaultL, unsigned threads = 0);

/// Distance from points of the z axis to the nearest cylinder surface.
struct ClearanceProfile {
  std::vector<double> z_values;
  /// +infinity entries only occur for an empty family.
  std::vector<double> clearance;
  bool unbounded = false;
  double max_clearance = 0.0;
  double z_at_max = 0.0;
};

/// Samples clearance(z) = max(0, min_i dist((0,0,z), l_i) - radius) at `steps`
/// uniform heights in [0, z_max]. The largest value is the radius of the
/// largest sphere centred on the z axis that avoids every cylinder.
ClearanceProfile axis_clearance(const CylinderFamily& family, double z_max, std::size_t steps,
                                unsigned threads = 0);

}  // namespace cylpack
