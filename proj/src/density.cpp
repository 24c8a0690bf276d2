#include "cylpack/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "cylpack/parallel.hpp"
#include "cylpack/point_lattice.hpp"
#include "cylpack/random.hpp"

namespace cylpack {

namespace {

// Axis in the form used by the membership test.
struct Axis {
  std::size_t index = 0;
  Vec3 base;
  Vec3 unit;
  // Horizontal displacement of the axis per unit of height.
  double slope_x = 0.0;
  double slope_y = 0.0;
  // Largest semi-axis of the horizontal cross-section: radius / |unit.z|.
  double semi = 0.0;
};

struct PreparedFamily {
  std::vector<Axis> sloped;
  // Axes too close to horizontal to bucket by height; tested for every sample.
  std::vector<Axis> flat;
  double radius = 0.0;
  double radius_sq = 0.0;
  std::size_t line_count = 0;
};

constexpr double kFlatTolerance = 1e-9;

PreparedFamily prepare(const CylinderFamily& fam, double R) {
  PreparedFamily out;
  out.radius = fam.radius;
  out.radius_sq = fam.radius * fam.radius;
  out.line_count = fam.size();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const Line& l = fam.lines[i];
    Axis a;
    a.index = i;
    a.base = l.base();
    a.unit = l.dir() * (1.0 / norm(l.dir()));
    // An axis farther than R + radius from the origin misses the ball.
    if (norm(cross(a.base, a.unit)) > R + fam.radius) continue;
    if (std::abs(a.unit.z) < kFlatTolerance) {
      out.flat.push_back(a);
      continue;
    }
    a.slope_x = a.unit.x / a.unit.z;
    a.slope_y = a.unit.y / a.unit.z;
    a.semi = fam.radius / std::abs(a.unit.z);
    out.sloped.push_back(a);
  }
  return out;
}

inline bool inside(const Axis& a, double x, double y, double z, double radius_sq) {
  const Vec3 w{x - a.base.x, y - a.base.y, z - a.base.z};
  return norm_sq(cross(w, a.unit)) <= radius_sq;
}

struct SlabLayout {
  std::vector<double> edges;     // S + 1 heights
  std::vector<double> volume;    // exact volume of the ball within each slab
  std::vector<std::uint64_t> quota;
};

double ball_slab_volume(double R, double z0, double z1) {
  auto prim = [R](double z) { return R * R * z - z * z * z / 3.0; };
  return std::numbers::pi * (prim(z1) - prim(z0));
}

SlabLayout make_layout(double R, std::uint64_t samples) {
  constexpr double kTargetThickness = 8.0;
  std::uint64_t s = static_cast<std::uint64_t>(std::ceil(2.0 * R / kTargetThickness));
  s = std::clamp<std::uint64_t>(s, 1, 512);
  s = std::min<std::uint64_t>(s, std::max<std::uint64_t>(1, samples / 256));

  SlabLayout lay;
  lay.edges.resize(s + 1);
  for (std::uint64_t i = 0; i <= s; ++i) lay.edges[i] = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(s);
  lay.edges.back() = R;
  lay.volume.resize(s);
  double total = 0.0;
  for (std::uint64_t i = 0; i < s; ++i) {
    lay.volume[i] = ball_slab_volume(R, lay.edges[i], lay.edges[i + 1]);
    total += lay.volume[i];
  }

  // Proportional allocation by largest remainder; every slab gets at least one sample.
  lay.quota.assign(s, 0);
  std::vector<std::pair<double, std::size_t>> frac(s);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const double q = static_cast<double>(samples) * lay.volume[i] / total;
    lay.quota[i] = static_cast<std::uint64_t>(std::floor(q));
    frac[i] = {q - std::floor(q), i};
    assigned += lay.quota[i];
  }
  std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < samples && k < frac.size(); ++k, ++assigned) ++lay.quota[frac[k].second];
  for (std::size_t i = 0; i < s; ++i) {
    if (lay.quota[i] == 0) {
      auto big = std::max_element(lay.quota.begin(), lay.quota.end());
      --*big;
      lay.quota[i] = 1;
    }
  }
  return lay;
}

struct SlabResult {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::vector<std::pair<std::size_t, std::uint64_t>> per_cylinder;
};

// Candidate lists of the sloped axes near one slab, as a CSR grid over the
// horizontal disk of the slab.
class SlabGrid {
 public:
  SlabGrid(const PreparedFamily& fam, double z_mid, double half_thickness, double rho) : rho_(rho) {
    double max_margin = 0.0;
    for (const Axis& a : fam.sloped) {
      max_margin = std::max(max_margin, a.semi + half_thickness * std::hypot(a.slope_x, a.slope_y));
    }
    cell_ = std::max(2.0 * max_margin, 1e-6 * std::max(rho, 1.0));
    constexpr std::int64_t kMaxCells = 4096;
    n_ = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(2.0 * rho / cell_)), 1, kMaxCells);
    cell_ = std::max(cell_, 2.0 * rho / static_cast<double>(n_));

    struct Span {
      std::int64_t x0, x1, y0, y1;
    };
    std::vector<Span> spans(fam.sloped.size());
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(n_ * n_) + 1, 0);
    for (std::size_t k = 0; k < fam.sloped.size(); ++k) {
      const Axis& a = fam.sloped[k];
      const double dz = z_mid - a.base.z;
      const double cx = a.base.x + dz * a.slope_x;
      const double cy = a.base.y + dz * a.slope_y;
      const double margin = a.semi + half_thickness * std::hypot(a.slope_x, a.slope_y);
      if (std::hypot(cx, cy) > rho + margin) {
        spans[k] = {1, 0, 1, 0};
        continue;
      }
      spans[k] = {cell_of(cx - margin), cell_of(cx + margin), cell_of(cy - margin), cell_of(cy + margin)};
      for (std::int64_t ix = spans[k].x0; ix <= spans[k].x1; ++ix)
        for (std::int64_t iy = spans[k].y0; iy <= spans[k].y1; ++iy) ++counts[static_cast<std::size_t>(ix * n_ + iy)];
    }
    offsets_.resize(counts.size());
    std::uint32_t acc = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      offsets_[c] = acc;
      acc += counts[c];
    }
    items_.resize(acc);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end());
    for (std::size_t k = 0; k < fam.sloped.size(); ++k) {
      const Span& sp = spans[k];
      for (std::int64_t ix = sp.x0; ix <= sp.x1; ++ix)
        for (std::int64_t iy = sp.y0; iy <= sp.y1; ++iy)
          items_[cursor[static_cast<std::size_t>(ix * n_ + iy)]++] = static_cast<std::uint32_t>(k);
    }
  }

  std::span<const std::uint32_t> candidates(double x, double y) const {
    const auto c = static_cast<std::size_t>(cell_of(x) * n_ + cell_of(y));
    return {items_.data() + offsets_[c], items_.data() + offsets_[c + 1]};
  }

 private:
  std::int64_t cell_of(double v) const {
    const auto i = static_cast<std::int64_t>(std::floor((v + rho_) / cell_));
    return std::clamp<std::int64_t>(i, 0, n_ - 1);
  }

  double rho_;
  double cell_ = 1.0;
  std::int64_t n_ = 1;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> items_;
};

SlabResult sample_slab(const PreparedFamily& fam, double R, const SlabLayout& lay, std::size_t s,
                       std::uint64_t seed, std::uint64_t stream, bool per_cylinder) {
  SlabResult res;
  res.samples = lay.quota[s];
  const double z0 = lay.edges[s];
  const double z1 = lay.edges[s + 1];
  const double zmin_abs = (z0 <= 0.0 && z1 >= 0.0) ? 0.0 : std::min(std::abs(z0), std::abs(z1));
  const double rho = std::sqrt(std::max(0.0, R * R - zmin_abs * zmin_abs));
  const SlabGrid grid(fam, 0.5 * (z0 + z1), 0.5 * (z1 - z0), rho);

  std::vector<std::uint64_t> counts;
  std::vector<std::size_t> touched;
  if (per_cylinder) counts.assign(fam.line_count, 0);
  auto bump = [&](std::size_t idx) {
    if (counts[idx]++ == 0) touched.push_back(idx);
  };

  CounterRng rng(seed, (stream << 32) | static_cast<std::uint64_t>(s));
  const double rho_sq = rho * rho;
  const double r_sq = R * R;
  for (std::uint64_t k = 0; k < res.samples; ++k) {
    double x, y, z;
    do {
      z = rng.uniform(z0, z1);
      x = rng.uniform(-rho, rho);
      y = rng.uniform(-rho, rho);
    } while (x * x + y * y > rho_sq || x * x + y * y + z * z > r_sq);

    bool hit = false;
    for (std::uint32_t c : grid.candidates(x, y)) {
      const Axis& a = fam.sloped[c];
      if (inside(a, x, y, z, fam.radius_sq)) {
        hit = true;
        if (!per_cylinder) break;
        bump(a.index);
      }
    }
    if (!hit || per_cylinder) {
      for (const Axis& a : fam.flat) {
        if (inside(a, x, y, z, fam.radius_sq)) {
          hit = true;
          if (!per_cylinder) break;
          bump(a.index);
        }
      }
    }
    if (hit) ++res.hits;
  }
  if (per_cylinder) {
    std::sort(touched.begin(), touched.end());
    res.per_cylinder.reserve(touched.size());
    for (std::size_t idx : touched) res.per_cylinder.emplace_back(idx, counts[idx]);
  }
  return res;
}

void require_sampling_args(double R, std::uint64_t samples) {
  if (!(R > 0.0)) throw std::invalid_argument("density: R must be positive");
  if (samples < kMinDensitySamples) {
    throw std::invalid_argument("density: need at least 10^4 samples, got " + std::to_string(samples));
  }
}

CylinderVolumes estimate(const CylinderFamily& fam, double R, std::uint64_t samples, std::uint64_t seed,
                         unsigned threads, std::uint64_t stream, bool per_cylinder) {
  require_sampling_args(R, samples);
  CylinderVolumes out;
  DensityEstimate& est = out.total;
  est.R = R;
  est.samples = samples;
  est.seed = seed;
  est.family_kind = fam.kind;
  if (per_cylinder) {
    out.volume.assign(fam.size(), 0.0);
    out.variance.assign(fam.size(), 0.0);
  }
  if (fam.size() == 0) return out;

  const PreparedFamily prepared = prepare(fam, R);
  const SlabLayout lay = make_layout(R, samples);
  std::vector<SlabResult> results(lay.quota.size());
  parallel_for(results.size(), threads, [&](std::size_t s) {
    results[s] = sample_slab(prepared, R, lay, s, seed, stream, per_cylinder);
  });

  const double vol = ball_volume(R);
  double density = 0.0;
  double var = 0.0;
  for (std::size_t s = 0; s < results.size(); ++s) {
    const SlabResult& r = results[s];
    const double n = static_cast<double>(r.samples);
    const double w = lay.volume[s] / vol;
    const double p = static_cast<double>(r.hits) / n;
    density += w * p;
    var += w * w * p * (1.0 - p) / n;
    est.hits += r.hits;
    for (const auto& [idx, count] : r.per_cylinder) {
      const double pc = static_cast<double>(count) / n;
      out.volume[idx] += lay.volume[s] * pc;
      out.variance[idx] += lay.volume[s] * lay.volume[s] * pc * (1.0 - pc) / n;
    }
  }
  est.density = std::clamp(density, 0.0, 1.0);
  est.std_error = std::sqrt(var);
  est.covered_volume = est.density * vol;
  return out;
}

}  // namespace

double ball_volume(double R) { return 4.0 / 3.0 * std::numbers::pi * R * R * R; }

DensityEstimate covered_volume(const CylinderFamily& family, double R, std::uint64_t samples, std::uint64_t seed,
                               unsigned threads) {
  return estimate(family, R, samples, seed, threads, 0, false).total;
}

DensityEstimate local_density(const CylinderFamily& family, double R, std::uint64_t samples, std::uint64_t seed,
                              unsigned threads) {
  return covered_volume(family, R, samples, seed, threads);
}

CylinderVolumes per_cylinder_volumes(const CylinderFamily& family, double R, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads, std::uint64_t stream) {
  return estimate(family, R, samples, seed, threads, stream, true);
}

CongruenceReport congruence_check(std::span<const PlanarPoint> points, double r, std::optional<double> param,
                                  FamilyKind kind, double R, std::uint64_t samples, std::uint64_t seed,
                                  unsigned threads) {
  CylinderFamily tilted;
  CylinderFamily vertical;
  switch (kind) {
    case FamilyKind::local:
      tilted = local_family(points, r, param);
      vertical = perpendicular_family(points, tilted.radius);
      break;
    case FamilyKind::global:
      tilted = global_family(points, param.value_or(kDefaultL));
      vertical = perpendicular_family(points, tilted.radius);
      break;
    default:
      throw std::invalid_argument("congruence_check: kind must be local or global");
  }

  const CylinderVolumes vt = per_cylinder_volumes(tilted, R, samples, seed, threads, 1);
  const CylinderVolumes vp = per_cylinder_volumes(vertical, R, samples, seed, threads, 2);

  CongruenceReport rep;
  rep.kind = kind;
  rep.R = R;
  rep.cylinders = points.size();
  rep.tilted = vt.total;
  rep.perpendicular = vp.total;
  rep.z_scores.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double diff = std::abs(vt.volume[i] - vp.volume[i]);
    const double sd = std::sqrt(vt.variance[i] + vp.variance[i]);
    double z = 0.0;
    if (sd > 0.0) {
      z = diff / sd;
    } else if (diff > 0.0) {
      z = std::numeric_limits<double>::infinity();
    }
    rep.z_scores[i] = z;
    rep.max_z = std::max(rep.max_z, z);
    if (z > rep.per_cylinder_sigma) rep.failing.push_back(i);
  }
  const double vol = ball_volume(R);
  const double sd_total = vol * std::hypot(vt.total.std_error, vp.total.std_error);
  const double diff_total = std::abs(vt.total.covered_volume - vp.total.covered_volume);
  rep.aggregate_z = sd_total > 0.0 ? diff_total / sd_total
                                   : (diff_total > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return rep;
}

std::vector<SeriesRow> global_density_series(std::span<const int> R_list, std::uint64_t samples, std::uint64_t seed,
                                             double L, unsigned threads) {
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    if (R_list[i] < 64) throw std::invalid_argument("global_density_series: every R must be >= 64");
    if (i > 0 && R_list[i] <= R_list[i - 1]) throw std::invalid_argument("global_density_series: R must increase");
  }
  std::vector<SeriesRow> rows;
  for (int R : R_list) {
    const auto pts = build_set(R);
    const CylinderFamily vertical = perpendicular_family(pts, 0.5);
    const CylinderFamily tilted = global_family(pts, L);
    SeriesRow row;
    row.R = R;
    row.point_density = point_density(R);
    row.product_law = row.point_density * std::numbers::pi / 4.0;
    row.perpendicular = estimate(vertical, R, samples, seed, threads, 0, false).total;
    row.tilted = estimate(tilted, R, samples, seed, threads, 1, false).total;
    const double sd = std::hypot(row.perpendicular.std_error, row.tilted.std_error);
    row.congruence_z = sd > 0.0 ? std::abs(row.tilted.density - row.perpendicular.density) / sd : 0.0;
    rows.push_back(row);
  }
  return rows;
}

ClearanceProfile axis_clearance(const CylinderFamily& family, double z_max, std::size_t steps, unsigned threads) {
  if (!(z_max > 0.0)) throw std::invalid_argument("axis_clearance: z_max must be positive");
  if (steps == 0) throw std::invalid_argument("axis_clearance: steps must be positive");
  ClearanceProfile prof;
  prof.z_values.resize(steps);
  prof.clearance.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    prof.z_values[k] = steps == 1 ? 0.0 : z_max * static_cast<double>(k) / static_cast<double>(steps - 1);
  }
  if (family.size() == 0) {
    prof.unbounded = true;
    std::fill(prof.clearance.begin(), prof.clearance.end(), std::numeric_limits<double>::infinity());
    prof.max_clearance = std::numeric_limits<double>::infinity();
    return prof;
  }
  parallel_for(steps, threads, [&](std::size_t k) {
    const Vec3 p{0.0, 0.0, prof.z_values[k]};
    double best = std::numeric_limits<double>::infinity();
    for (const Line& l : family.lines) best = std::min(best, point_line_distance(p, l));
    prof.clearance[k] = std::max(0.0, best - family.radius);
  });
  for (std::size_t k = 0; k < steps; ++k) {
    if (k == 0 || prof.clearance[k] > prof.max_clearance) {
      prof.max_clearance = prof.clearance[k];
      prof.z_at_max = prof.z_values[k];
    }
  }
  return prof;
}

}  // namespace cylpack
