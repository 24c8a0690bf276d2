#include "cylpack/certifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "cylpack/parallel.hpp"
#include "cylpack/random.hpp"

namespace cylpack {

namespace {

// Axes in structure-of-arrays form for the pair loop.
struct AxisTable {
  std::vector<double> bx, by, bz, vx, vy, vz, vn2;

  explicit AxisTable(const std::vector<Line>& lines) {
    const std::size_t n = lines.size();
    for (auto* v : {&bx, &by, &bz, &vx, &vy, &vz, &vn2}) v->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& b = lines[i].base();
      const Vec3& d = lines[i].dir();
      bx[i] = b.x;
      by[i] = b.y;
      bz[i] = b.z;
      vx[i] = d.x;
      vy[i] = d.y;
      vz[i] = d.z;
      vn2[i] = norm_sq(d);
    }
  }
};

struct ScanSettings {
  bool check_distance = true;
  double violation_q = 0.0;  // squared (threshold - slack)
  double parallel_tol_sq = 0.0;
  std::size_t max_listed = 0;
};

// Partial result over a contiguous block of pairs.
struct Partial {
  std::uint64_t pairs = 0;
  double min_q = std::numeric_limits<double>::infinity();
  std::size_t arg_i = 0;
  std::size_t arg_j = 0;
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  std::uint64_t violation_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> parallel;
  std::uint64_t parallel_count = 0;
};

// Squared axis distance of pair (i, j); flags parallel pairs.
inline double pair_q(const AxisTable& t, std::size_t i, std::size_t j, double ptol2, bool& parallel) {
  const double ox = t.bx[j] - t.bx[i];
  const double oy = t.by[j] - t.by[i];
  const double oz = t.bz[j] - t.bz[i];
  const double cx = t.vy[i] * t.vz[j] - t.vz[i] * t.vy[j];
  const double cy = t.vz[i] * t.vx[j] - t.vx[i] * t.vz[j];
  const double cz = t.vx[i] * t.vy[j] - t.vy[i] * t.vx[j];
  const double c2 = cx * cx + cy * cy + cz * cz;
  parallel = c2 <= ptol2 * t.vn2[i] * t.vn2[j];
  if (!parallel) {
    const double tp = ox * cx + oy * cy + oz * cz;
    return tp * tp / c2;
  }
  const double px = oy * t.vz[i] - oz * t.vy[i];
  const double py = oz * t.vx[i] - ox * t.vz[i];
  const double pz = ox * t.vy[i] - oy * t.vx[i];
  return (px * px + py * py + pz * pz) / t.vn2[i];
}

inline void account(Partial& p, const ScanSettings& s, std::size_t i, std::size_t j, double q, bool parallel) {
  ++p.pairs;
  if (q < p.min_q) {
    p.min_q = q;
    p.arg_i = i;
    p.arg_j = j;
  }
  if (s.check_distance && q < s.violation_q) {
    if (p.violations.size() < s.max_listed) p.violations.emplace_back(i, j);
    ++p.violation_count;
  }
  if (parallel) {
    if (p.parallel.size() < s.max_listed) p.parallel.emplace_back(i, j);
    ++p.parallel_count;
  }
}

void scan_rows(const AxisTable& t, const ScanSettings& s, std::size_t row_begin, std::size_t row_end, Partial& p) {
  const std::size_t n = t.bx.size();
  for (std::size_t i = row_begin; i < row_end; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool parallel = false;
      const double q = pair_q(t, i, j, s.parallel_tol_sq, parallel);
      account(p, s, i, j, q, parallel);
    }
  }
}

// Splits rows 0..n-1 of the upper triangle into blocks of roughly equal pair count.
std::vector<std::size_t> row_blocks(std::size_t n, std::size_t target_blocks) {
  std::vector<std::size_t> bounds{0};
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t per_block = std::max<std::uint64_t>(1, total / std::max<std::size_t>(1, target_blocks));
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += n - 1 - i;
    if (acc >= per_block) {
      bounds.push_back(i + 1);
      acc = 0;
    }
  }
  if (bounds.back() != n) bounds.push_back(n);
  return bounds;
}

PairRecord make_record(const CylinderFamily& fam, std::size_t i, std::size_t j, double parallel_tol) {
  return {i, j, line_distance(fam.lines[i], fam.lines[j], parallel_tol)};
}

VerificationReport run_scan(const CylinderFamily& fam, const VerifyConfig& cfg, bool check_distance,
                            VerifyMode mode) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.kind = fam.kind;
  rep.truncation_R = static_cast<int>(std::ceil(fam.max_radial()));
  rep.lines = fam.size();
  rep.threshold = cfg.threshold.value_or(2.0 * fam.radius);
  rep.slack = cfg.slack;
  rep.distance_checked = check_distance;
  rep.mode = mode;
  rep.seed = cfg.seed;
  rep.threads = resolve_threads(cfg.threads);
  rep.min_distance = std::numeric_limits<double>::infinity();

  const std::size_t n = fam.size();
  const std::uint64_t total_pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (mode == VerifyMode::exhaustive && total_pairs > cfg.pair_budget && !cfg.force) {
    throw PairBudgetExceeded("exhaustive verification of " + std::to_string(total_pairs) +
                             " pairs exceeds the pair budget of " + std::to_string(cfg.pair_budget) +
                             "; use sampled mode or force");
  }

  ScanSettings s;
  s.check_distance = check_distance;
  const double lim = rep.threshold - cfg.slack;
  s.violation_q = lim > 0.0 ? lim * lim : 0.0;
  s.parallel_tol_sq = cfg.parallel_tol * cfg.parallel_tol;
  s.max_listed = cfg.max_listed;

  std::vector<Partial> partials;
  if (n >= 2) {
    const AxisTable table(fam.lines);
    if (mode == VerifyMode::exhaustive) {
      const auto bounds = row_blocks(n, 64 * static_cast<std::size_t>(rep.threads));
      partials.resize(bounds.size() - 1);
      parallel_for(partials.size(), rep.threads,
                   [&](std::size_t b) { scan_rows(table, s, bounds[b], bounds[b + 1], partials[b]); });
    } else {
      constexpr std::uint64_t kPerTask = 1u << 20;
      const std::uint64_t count = cfg.sample_pairs;
      partials.resize(static_cast<std::size_t>((count + kPerTask - 1) / kPerTask));
      parallel_for(partials.size(), rep.threads, [&](std::size_t task) {
        CounterRng rng(cfg.seed, task);
        const std::uint64_t lo = task * kPerTask;
        const std::uint64_t hi = std::min(count, lo + kPerTask);
        for (std::uint64_t k = lo; k < hi; ++k) {
          std::size_t i = static_cast<std::size_t>(rng.below(n));
          std::size_t j = static_cast<std::size_t>(rng.below(n - 1));
          if (j >= i) ++j;
          if (j < i) std::swap(i, j);
          bool parallel = false;
          const double q = pair_q(table, i, j, s.parallel_tol_sq, parallel);
          account(partials[task], s, i, j, q, parallel);
        }
      });
    }
  }

  // Merge in block order; ties on the minimum keep the earliest block.
  double best_q = std::numeric_limits<double>::infinity();
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (const Partial& p : partials) {
    rep.pairs_checked += p.pairs;
    if (p.pairs > 0 && (!best || p.min_q < best_q)) {
      best_q = p.min_q;
      best = {p.arg_i, p.arg_j};
    }
    rep.violation_count += p.violation_count;
    rep.parallel_count += p.parallel_count;
    for (const auto& [i, j] : p.violations) {
      if (rep.violations.size() < cfg.max_listed) rep.violations.push_back(make_record(fam, i, j, cfg.parallel_tol));
    }
    for (const auto& [i, j] : p.parallel) {
      if (rep.parallel_pairs.size() < cfg.max_listed)
        rep.parallel_pairs.push_back(make_record(fam, i, j, cfg.parallel_tol));
    }
  }
  if (best) {
    rep.argmin = make_record(fam, best->first, best->second, cfg.parallel_tol);
    rep.min_distance = rep.argmin->distance;
  }
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

std::string_view to_string(VerifyMode mode) {
  return mode == VerifyMode::exhaustive ? "exhaustive" : "sampled";
}

std::optional<VerifyMode> parse_verify_mode(std::string_view s) {
  if (s == "exhaustive") return VerifyMode::exhaustive;
  if (s == "sampled") return VerifyMode::sampled;
  return std::nullopt;
}

VerificationReport verify_packing(const CylinderFamily& family, const VerifyConfig& config) {
  return run_scan(family, config, true, config.mode);
}

VerificationReport verify_nonparallel(const CylinderFamily& family, const VerifyConfig& config) {
  return run_scan(family, config, false, VerifyMode::exhaustive);
}

}  // namespace cylpack
