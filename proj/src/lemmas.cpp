#include "cylpack/lemmas.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cylpack/parallel.hpp"
#include "cylpack/random.hpp"
#include "cylpack/vec3.hpp"

namespace cylpack {

PairGeometry PairGeometry::from_cos(double d1, double d2, double c, double L) {
  if (!(c >= -1.0 && c <= 1.0)) throw std::invalid_argument("PairGeometry: c outside [-1, 1]");
  if (!(d1 > 0.0 && d2 > 0.0)) throw std::invalid_argument("PairGeometry: radii must be positive");
  return {d1, d2, c, 1.0 - c, L, k_for(L)};
}

PairGeometry PairGeometry::from_ring_points(const RingIndex& a, const RingIndex& b, double L) {
  const double theta = angle_between(a, b);
  const double s = std::sin(0.5 * theta);
  return {static_cast<double>(a.d), static_cast<double>(b.d), std::cos(theta), 2.0 * s * s, L, k_for(L)};
}

double triple_product(const PairGeometry& g) {
  const double n = g.d2 - g.d1;
  return g.one_minus_c * g.d1 * g.d2 * (g.K * g.d1 + g.K * g.d2 + 2.0 * g.L) + g.L * n * n;
}

double cross_norm_sq(const PairGeometry& g) {
  const double n = g.d2 - g.d1;
  const double p = g.d1 * g.d2;
  const double u = g.one_minus_c;
  return -u * u * p * p + 2.0 * u * p * (g.L * g.L * (1.0 + p) + g.K * g.L * (g.d1 + g.d2)) + g.L * g.L * n * n;
}

double delta(const PairGeometry& g) {
  const double n = g.d2 - g.d1;
  const double n2 = n * n;
  const double p = g.d1 * g.d2;
  const double u = g.one_minus_c;
  const double slope = g.K * g.d1 + g.K * g.d2 + 2.0 * g.L;
  const double first = u * u * p * p * (1.0 + slope * slope);
  const double second = g.L * g.L * n2 * (n2 - 1.0);
  const double third = 2.0 * u * p *
                       (g.K * g.L * (g.d1 + g.d2) * (n2 - 1.0) +
                        g.L * g.L * (2.0 * g.d2 * g.d2 - 5.0 * p + 2.0 * g.d1 * g.d1 - 1.0));
  return first + second + third;
}

double delta_prime(const PairGeometry& g) {
  if (g.one_minus_c == 0.0) throw std::domain_error("delta_prime: undefined for c == 1");
  const double n = g.d2 - g.d1;
  const double sum = g.d1 + g.d2;
  const double p = g.d1 * g.d2;
  return 0.5 * g.K * g.K * g.one_minus_c * p * sum * sum + g.K * g.L * sum * (n * n - 1.0) +
         g.L * g.L * (2.0 * g.d2 * g.d2 - 5.0 * p + 2.0 * g.d1 * g.d1 - 1.0);
}

std::array<SqrtThreeInt, 5> quartic_coefficients(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("quartic_coefficients: n must be >= 0");
  const BigInt x = n;
  const BigInt x2 = x * x;
  const BigInt x3 = x2 * x;
  const BigInt x4 = x3 * x;
  const BigInt x5 = x4 * x;
  const BigInt x6 = x5 * x;
  return {
      SqrtThreeInt{32 * x2 - 32, -28 * x + 56},
      SqrtThreeInt{112 * x3 - 112 * x, -21 * x2 + 112 * x},
      SqrtThreeInt{144 * x4 - 144 * x2, 98 * x3 + 70 * x2 - 56 * x},
      SqrtThreeInt{80 * x5 - 80 * x3, 147 * x4 + 14 * x3 - 77 * x2},
      SqrtThreeInt{16 * x6 - 16 * x4, 56 * x5 - 28 * x3},
  };
}

std::array<double, 5> quartic_coefficients_numeric(double n, double L, double K) {
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  return {
      8 * K * n2 - 4 * L * n - 8 * K + 8 * L,
      28 * K * n3 - 3 * L * n2 - 28 * K * n + 16 * L * n,
      36 * K * n4 + 14 * L * n3 - 36 * K * n2 + 10 * L * n2 - 8 * L * n,
      20 * K * n5 + 21 * L * n4 - 20 * K * n3 + 2 * L * n3 - 11 * L * n2,
      4 * K * n6 + 8 * L * n5 - 4 * K * n4 - 4 * L * n3,
  };
}

QuarticCertificate certify_quartic(std::int64_t n_max, unsigned threads) {
  if (n_max < 0) throw std::invalid_argument("certify_quartic: n_max must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  constexpr std::int64_t kBlock = 8192;
  const auto blocks = static_cast<std::size_t>(n_max / kBlock + 1);

  struct BlockResult {
    std::uint64_t checked = 0;
    std::optional<std::pair<std::int64_t, int>> first_negative;
  };
  std::vector<BlockResult> results(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t hi = std::min(n_max, lo + kBlock - 1);
    BlockResult& out = results[b];
    for (std::int64_t n = lo; n <= hi; ++n) {
      const auto coeffs = quartic_coefficients(n);
      for (int deg = 0; deg < 5; ++deg) {
        ++out.checked;
        if (!out.first_negative && sqrt3_sign(coeffs[static_cast<std::size_t>(deg)]) == Sign::negative) {
          out.first_negative = {n, 4 - deg};
        }
      }
    }
  });

  QuarticCertificate cert;
  cert.n_max = n_max;
  for (const auto& r : results) {
    cert.coefficients_checked += r.checked;
    if (!cert.first_negative && r.first_negative) cert.first_negative = r.first_negative;
  }
  cert.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

double cos_lemma_phi(double x) {
  const double s = std::sin(std::numbers::pi / (6.0 * x));
  const double one_minus_cos = 2.0 * s * s;
  return 2.0 * x * x * x * x / ((x + 1.0) * (x + 1.0)) * one_minus_cos;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 2) throw std::invalid_argument("geometric_grid: bad range");
  std::vector<double> g(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

CosLemmaReport check_cos_lemma(std::span<const double> x_grid, double bound) {
  if (x_grid.empty()) throw std::invalid_argument("check_cos_lemma: empty grid");
  CosLemmaReport rep;
  rep.bound = bound;
  for (double x : x_grid) {
    if (!(x >= 32.0)) throw std::invalid_argument("check_cos_lemma: grid must lie in [32, inf)");
  }
  rep.x.assign(x_grid.begin(), x_grid.end());
  rep.phi.reserve(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double v = cos_lemma_phi(x_grid[i]);
    rep.phi.push_back(v);
    bool fail = false;
    if (!(v > bound)) {
      rep.above_bound = false;
      fail = true;
    }
    if (i > 0 && (x_grid[i] < x_grid[i - 1] || v < rep.phi[i - 1])) {
      rep.nondecreasing = false;
      fail = true;
    }
    if (fail && !rep.first_failure_x) rep.first_failure_x = x_grid[i];
  }
  rep.limit_gap = std::abs(rep.phi.back() - std::numbers::pi * std::numbers::pi / 9.0);
  return rep;
}

double one_minus_c_lower_bound(double d2, double L) {
  const double k = k_for(L);
  const double d4 = d2 * d2 * d2 * d2;
  return (L * L) / (k * k) * (d2 + 1.0) * (d2 + 1.0) / (2.0 * d4);
}

namespace {

void record_gap(GapBoundReport& rep, int d1, int d2, double omc, double L) {
  const double bound = one_minus_c_lower_bound(d2, L);
  const double ratio = omc / bound;
  if (rep.checked == 0 || ratio < rep.min_ratio) rep.min_ratio = ratio;
  ++rep.checked;
  if (omc < bound) rep.failures.push_back({d1, d2, omc, bound});
}

}  // namespace

GapBoundReport check_one_minus_c_bound(int d2_lo, int d2_hi, double L) {
  if (d2_lo < kFirstRing || d2_hi < d2_lo) throw std::invalid_argument("check_one_minus_c_bound: bad ring range");
  GapBoundReport rep;
  for (int d2 = d2_lo; d2 <= d2_hi; ++d2) {
    // Smallest nonzero angle between a point of ring d2 and any point of a
    // ring d1 <= d2: both angles are multiples of pi/(3*2^m).
    const RingIndex a{d2, ring_exponent(d2), 1};
    const RingIndex b{d2, a.m, 2};
    record_gap(rep, d2, d2, one_minus_cos_between(a, b), L);
  }
  return rep;
}

GapBoundReport check_one_minus_c_bound(std::span<const std::pair<RingIndex, RingIndex>> pairs, double L) {
  GapBoundReport rep;
  for (const auto& [p, q] : pairs) {
    const double omc = one_minus_cos_between(p, q);
    if (omc == 0.0) {
      ++rep.skipped_same_angle;
      continue;
    }
    record_gap(rep, std::min(p.d, q.d), std::max(p.d, q.d), omc, L);
  }
  return rep;
}

Lemma1Report lemma1_certificate(std::span<const PlanarPoint> points, double r, double T, std::optional<double> R,
                                double rel_tol, double slack) {
  Lemma1Report rep;
  rep.r = r;
  rep.T = T;
  double max_d = 0.0;
  for (const auto& p : points) max_d = std::max(max_d, std::hypot(p.x, p.y));
  rep.R = R.value_or(max_d);
  rep.distance_bound = 2.0 * r * (1.0 - 1.0 / T);
  rep.min_distance = std::numeric_limits<double>::infinity();

  if (!(r > 0.0)) rep.precondition_failures.push_back("r must be positive");
  if (!(T > 0.0)) rep.precondition_failures.push_back("T must be positive");
  if (max_d > rep.R * (1.0 + 1e-12)) {
    rep.precondition_failures.push_back("point radius " + std::to_string(max_d) + " exceeds R = " +
                                        std::to_string(rep.R));
  }
  const double r4 = rep.R * rep.R * rep.R * rep.R;
  if (8.0 * r * r * T < r4 * (1.0 - 1e-12)) {
    rep.precondition_failures.push_back("8 r^2 T = " + std::to_string(8.0 * r * r * T) + " < R^4 = " +
                                        std::to_string(r4));
  }
  for (const auto& p : points) {
    if (p.x == 0.0 && p.y == 0.0) rep.precondition_failures.push_back("point at the origin");
  }
  if (points.size() >= 2) {
    const double sep = min_pair_distance_points(points);
    if (sep < 2.0 * r - slack) {
      rep.precondition_failures.push_back("minimum point separation " + std::to_string(sep) + " < 2r");
    }
  }
  if (!rep.precondition_failures.empty()) return rep;

  for (std::size_t i = 0; i < points.size(); ++i) {
    const PlanarPoint& a = points[i];
    const Line li({a.x, a.y, 0.0}, {a.y, -a.x, T});
    const double d1 = std::hypot(a.x, a.y);
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const PlanarPoint& b = points[j];
      const Line lj({b.x, b.y, 0.0}, {b.y, -b.x, T});
      const double d2 = std::hypot(b.x, b.y);
      ++rep.pairs;

      const Vec3 cr = cross(li.dir(), lj.dir());
      const double triple_direct = dot(lj.base() - li.base(), cr);
      const double cross_direct = norm_sq(cr);

      const double c = (a.x * b.x + a.y * b.y) / (d1 * d2);
      const double chord_sq = d1 * d1 + d2 * d2 - 2.0 * c * d1 * d2;
      const double triple_closed = T * chord_sq;
      const double cross_closed = T * T * chord_sq + (1.0 - c * c) * d1 * d1 * d2 * d2;

      const double e_top = std::abs(triple_closed - triple_direct) / std::max(std::abs(triple_direct), 1.0);
      const double e_bot = std::abs(cross_closed - cross_direct) / std::max(std::abs(cross_direct), 1.0);
      rep.max_triple_rel_err = std::max(rep.max_triple_rel_err, e_top);
      rep.max_cross_rel_err = std::max(rep.max_cross_rel_err, e_bot);
      if (e_top > rel_tol) rep.failures.push_back({i, j, "triple product closed form", e_top});
      if (e_bot > rel_tol) rep.failures.push_back({i, j, "cross norm closed form", e_bot});

      const double dist = line_distance(li, lj);
      rep.min_distance = std::min(rep.min_distance, dist);
      if (dist < rep.distance_bound - slack) rep.failures.push_back({i, j, "axis distance below 2r(1-1/T)", dist});
    }
  }
  return rep;
}

namespace {

RingIndex random_ring_index(CounterRng& rng, int r_max) {
  const int d = kFirstRing + static_cast<int>(rng.below(static_cast<std::uint64_t>(r_max - kFirstRing + 1)));
  const int m = ring_exponent(d);
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(6) << m));
  return {d, m, k};
}

int wrap_k(std::int64_t k, std::int64_t count) {
  k = (k - 1) % count;
  if (k < 0) k += count;
  return static_cast<int>(k + 1);
}

std::pair<RingIndex, RingIndex> random_pair(CounterRng& rng, int r_max) {
  for (;;) {
    const RingIndex a = random_ring_index(rng, r_max);
    RingIndex b;
    switch (rng.below(3)) {
      case 0:
        b = random_ring_index(rng, r_max);
        break;
      case 1:  // same ring, a few steps apart
        b = {a.d, a.m, wrap_k(a.k + 1 + static_cast<std::int64_t>(rng.below(4)), a.ring_count())};
        break;
      default: {  // radial neighbour at (nearly) the same angle
        const int d2 = a.d + 1 + static_cast<int>(rng.below(3));
        if (d2 > r_max) continue;
        const int m2 = ring_exponent(d2);
        const std::int64_t k2 = (std::int64_t{a.k} << (m2 - a.m)) + static_cast<std::int64_t>(rng.below(3)) - 1;
        b = {d2, m2, wrap_k(k2, std::int64_t{6} << m2)};
        break;
      }
    }
    if (!(a == b)) return {a, b};
  }
}

// Triple product and |v1 x v2|^2 of two global axes, evaluated from the
// coordinates in extended precision. Rounding the base points to double
// already moves the triple product of same-ring neighbours near d = 4096 by
// about 1e-8 relative, which would swamp the comparison.
struct DirectPair {
  long double triple = 0.0L;
  long double cross_sq = 0.0L;
};

DirectPair direct_pair(const RingIndex& a, const RingIndex& b, double L) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double Ll = L;
  const long double K = std::sqrt(Ll * Ll - 1.0L);
  auto coords = [&](const RingIndex& idx, long double out[6]) {
    const std::int64_t n = idx.ring_count();
    const long double angle = 2.0L * pi * static_cast<long double>(idx.k % n) / static_cast<long double>(n);
    const long double d = idx.d;
    out[0] = d * std::cos(angle);
    out[1] = d * std::sin(angle);
    out[2] = 0.0L;
    out[3] = out[1];
    out[4] = -out[0];
    out[5] = K * d + Ll;
  };
  long double p[6], q[6];
  coords(a, p);
  coords(b, q);
  const long double cx = p[4] * q[5] - p[5] * q[4];
  const long double cy = p[5] * q[3] - p[3] * q[5];
  const long double cz = p[3] * q[4] - p[4] * q[3];
  DirectPair out;
  out.triple = (q[0] - p[0]) * cx + (q[1] - p[1]) * cy + (q[2] - p[2]) * cz;
  out.cross_sq = cx * cx + cy * cy + cz * cz;
  return out;
}

}  // namespace

IdentityReport check_boxed_identities(std::uint64_t pair_count, std::uint64_t seed, int r_max, double L,
                                      unsigned threads) {
  if (r_max < kFirstRing) throw std::invalid_argument("check_boxed_identities: r_max must be >= 32");
  constexpr std::uint64_t kPerTask = 4096;
  const auto tasks = static_cast<std::size_t>((pair_count + kPerTask - 1) / kPerTask);
  std::vector<IdentityReport> parts(tasks);

  parallel_for(tasks, threads, [&](std::size_t t) {
    CounterRng rng(seed, t);
    IdentityReport& out = parts[t];
    out.min_delta_scaled = std::numeric_limits<double>::infinity();
    out.min_delta_prime = std::numeric_limits<double>::infinity();
    out.min_distance = std::numeric_limits<double>::infinity();
    const std::uint64_t lo = t * kPerTask;
    const std::uint64_t hi = std::min(pair_count, lo + kPerTask);
    for (std::uint64_t s = lo; s < hi; ++s) {
      auto [a, b] = random_pair(rng, r_max);
      if (a.d > b.d) std::swap(a, b);
      const DirectPair direct = direct_pair(a, b, L);
      const auto triple_direct = static_cast<double>(direct.triple);
      const auto cross_direct = static_cast<double>(direct.cross_sq);

      const PairGeometry g = PairGeometry::from_ring_points(a, b, L);
      const double tp = triple_product(g);
      const double cn = cross_norm_sq(g);
      const double dl = delta(g);

      ++out.pairs;
      out.max_triple_rel_err =
          std::max(out.max_triple_rel_err, std::abs(tp - triple_direct) / std::max(std::abs(triple_direct), 1.0));
      out.max_cross_rel_err =
          std::max(out.max_cross_rel_err, std::abs(cn - cross_direct) / std::max(std::abs(cross_direct), 1.0));
      out.max_delta_rel_err = std::max(out.max_delta_rel_err, std::abs(tp * tp - cn - dl) / std::max(1.0, std::abs(dl)));
      const double d2 = g.d2;
      out.min_delta_scaled = std::min(out.min_delta_scaled, dl / (d2 * d2 * d2 * d2 * L * L));
      if (g.one_minus_c > 0.0) out.min_delta_prime = std::min(out.min_delta_prime, delta_prime(g));
      out.min_distance = std::min(out.min_distance, std::abs(triple_direct) / std::sqrt(cross_direct));
    }
  });

  IdentityReport rep;
  rep.min_delta_scaled = std::numeric_limits<double>::infinity();
  rep.min_delta_prime = std::numeric_limits<double>::infinity();
  rep.min_distance = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    rep.pairs += p.pairs;
    rep.max_triple_rel_err = std::max(rep.max_triple_rel_err, p.max_triple_rel_err);
    rep.max_cross_rel_err = std::max(rep.max_cross_rel_err, p.max_cross_rel_err);
    rep.max_delta_rel_err = std::max(rep.max_delta_rel_err, p.max_delta_rel_err);
    rep.min_delta_scaled = std::min(rep.min_delta_scaled, p.min_delta_scaled);
    rep.min_delta_prime = std::min(rep.min_delta_prime, p.min_delta_prime);
    rep.min_distance = std::min(rep.min_distance, p.min_distance);
  }
  return rep;
}

}  // namespace cylpack
