#include "cylpack/point_lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cylpack/random.hpp"

namespace cylpack {

namespace {

void require_ring_radius(int d, const char* what) {
  if (d < kFirstRing) {
    throw std::invalid_argument(std::string(what) + ": radius must be >= 32, got " + std::to_string(d));
  }
}

// 2*pi*num/den for 0 <= num < den.
double turn_fraction_angle(std::int64_t num, std::int64_t den) {
  return 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
}

struct CellKey {
  std::int64_t cx;
  std::int64_t cy;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& c) const noexcept {
    const auto a = static_cast<std::uint64_t>(c.cx);
    const auto b = static_cast<std::uint64_t>(c.cy);
    std::uint64_t h = a * 0x9E3779B97F4A7C15ULL ^ (b + 0x7F4A7C159E3779B9ULL + (a << 6) + (a >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

struct GridResult {
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
};

// Minimum over pairs lying in the same or adjacent cells of a grid with cell size h.
GridResult grid_min(std::span<const PlanarPoint> pts, double h) {
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> cells;
  cells.reserve(pts.size());
  std::vector<CellKey> keys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    keys[i] = {static_cast<std::int64_t>(std::floor(pts[i].x / h)),
               static_cast<std::int64_t>(std::floor(pts[i].y / h))};
    cells[keys[i]].push_back(i);
  }
  GridResult res;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells.find({keys[i].cx + dx, keys[i].cy + dy});
        if (it == cells.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          const double ex = pts[j].x - pts[i].x;
          const double ey = pts[j].y - pts[i].y;
          const double dist = std::sqrt(ex * ex + ey * ey);
          if (dist < res.best) res.best = dist;
          res.found = true;
        }
      }
    }
  }
  return res;
}

}  // namespace

double PlanarPoint::radial() const {
  if (ring) return static_cast<double>(ring->d);
  return std::hypot(x, y);
}

int ring_exponent(int d) {
  if (d <= 0) throw std::invalid_argument("ring_exponent: d must be positive");
  return std::bit_width(static_cast<unsigned>(d)) - 1;
}

double ring_angle(const RingIndex& idx) {
  const std::int64_t n = idx.ring_count();
  std::int64_t k = idx.k % n;
  if (k < 0) k += n;
  return turn_fraction_angle(k, n);
}

double angle_between(const RingIndex& a, const RingIndex& b) {
  const int top = std::max(a.m, b.m);
  const std::int64_t den = std::int64_t{6} << top;
  std::int64_t num = (std::int64_t{b.k} << (top - b.m)) - (std::int64_t{a.k} << (top - a.m));
  num %= den;
  if (num < 0) num += den;
  if (2 * num > den) num = den - num;
  return turn_fraction_angle(num, den);
}

double one_minus_cos_between(const RingIndex& a, const RingIndex& b) {
  const double s = std::sin(0.5 * angle_between(a, b));
  return 2.0 * s * s;
}

Ring ring(int d) {
  require_ring_radius(d, "ring");
  Ring out;
  out.params.d = d;
  out.params.m = ring_exponent(d);
  out.params.count = std::int64_t{6} << out.params.m;
  out.params.theta = std::numbers::pi / (3.0 * static_cast<double>(std::int64_t{1} << out.params.m));
  out.points.reserve(static_cast<std::size_t>(out.params.count));
  const double radius = d;
  for (std::int64_t k = 1; k <= out.params.count; ++k) {
    RingIndex idx{d, out.params.m, static_cast<int>(k)};
    const double angle = ring_angle(idx);
    out.points.push_back({radius * std::cos(angle), radius * std::sin(angle), idx});
  }
  return out;
}

std::vector<PlanarPoint> build_set(int r_max) {
  require_ring_radius(r_max, "build_set");
  std::vector<PlanarPoint> pts;
  pts.reserve(static_cast<std::size_t>(count_up_to(r_max)));
  for (int d = kFirstRing; d <= r_max; ++d) {
    Ring r = ring(d);
    pts.insert(pts.end(), r.points.begin(), r.points.end());
  }
  return pts;
}

std::int64_t count_up_to(int r_max) {
  require_ring_radius(r_max, "count_up_to");
  std::int64_t total = 0;
  for (int d = kFirstRing; d <= r_max; ++d) total += std::int64_t{6} << ring_exponent(d);
  return total;
}

std::int64_t closed_form_count(int m) {
  if (m < 5) throw std::invalid_argument("closed_form_count: m must be >= 5");
  if (m > 30) throw std::invalid_argument("closed_form_count: m too large for 64-bit count");
  return (std::int64_t{1} << (2 * m + 1)) + (std::int64_t{6} << m) - (std::int64_t{1} << 11);
}

double min_pair_distance_points(std::span<const PlanarPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("min_pair_distance_points: need at least two points");
  // Any pair at distance <= h lies in adjacent cells, so a result <= h is exact.
  double h = 1.0;
  for (;;) {
    GridResult r = grid_min(points, h);
    if (r.found && r.best <= h) return r.best;
    h *= 2.0;
  }
}

double point_density(int r_max) {
  require_ring_radius(r_max, "point_density");
  const double r = r_max;
  return static_cast<double>(count_up_to(r_max)) / (std::numbers::pi * r * r);
}

std::vector<PlanarPoint> random_separated_points(double disk_radius, double separation, std::size_t attempts,
                                                 std::uint64_t seed) {
  if (!(disk_radius > 0.0) || !(separation > 0.0)) {
    throw std::invalid_argument("random_separated_points: radius and separation must be positive");
  }
  CounterRng rng(seed, 0);
  std::vector<PlanarPoint> out;
  const double sep_sq = separation * separation;
  for (std::size_t a = 0; a < attempts; ++a) {
    double x, y;
    do {
      x = rng.uniform(-disk_radius, disk_radius);
      y = rng.uniform(-disk_radius, disk_radius);
    } while (x * x + y * y >= disk_radius * disk_radius || (x == 0.0 && y == 0.0));
    const bool clear = std::all_of(out.begin(), out.end(), [&](const PlanarPoint& p) {
      return (p.x - x) * (p.x - x) + (p.y - y) * (p.y - y) >= sep_sq;
    });
    if (clear) out.push_back({x, y, std::nullopt});
  }
  return out;
}

}  // namespace cylpack
