// Acceptance gate: runs each acceptance criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cylpack/certifier.hpp"
#include "cylpack/cli.hpp"
#include "cylpack/density.hpp"
#include "cylpack/lemmas.hpp"
#include "cylpack/line_families.hpp"
#include "cylpack/point_lattice.hpp"
#include "cylpack/report_io.hpp"

using namespace cylpack;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome criterion1() {
  std::string detail;
  bool pass = true;
  for (int R : {96, 128}) {
    const CylinderFamily fam = global_family(build_set(R));
    VerifyConfig cfg;
    cfg.threshold = 1.0;
    const VerificationReport rep = verify_packing(fam, cfg);
    bool radial = false;
    if (rep.argmin) {
      const RingIndex a = *fam.base_points[rep.argmin->i].ring;
      const RingIndex b = *fam.base_points[rep.argmin->j].ring;
      radial = std::abs(a.d - b.d) == 1 && angle_between(a, b) == 0.0;
    }
    const bool ok = rep.violation_count == 0 && std::abs(rep.min_distance - 1.0) <= 1e-9 && radial &&
                    rep.pairs_checked == fam.size() * (fam.size() - 1) / 2;
    pass = pass && ok;
    detail += "R=" + std::to_string(R) + ": pairs=" + std::to_string(rep.pairs_checked) +
              " violations=" + std::to_string(rep.violation_count) + fmt(" min=%.15f", rep.min_distance) +
              (radial ? " (radial neighbours)" : " (argmin not radial)") + fmt(" %.1fs; ", rep.runtime_ms / 1000);
  }
  return {pass, detail};
}

Outcome criterion2() {
  const auto pts = build_set(96);
  const VerificationReport local = verify_nonparallel(local_family(pts, 0.5));
  const VerificationReport global = verify_nonparallel(global_family(pts));
  const bool pass = local.parallel_count == 0 && global.parallel_count == 0 &&
                    local.pairs_checked == global.pairs_checked && local.pairs_checked > 0;
  return {pass, "parallel pairs: local=" + std::to_string(local.parallel_count) +
                    " global=" + std::to_string(global.parallel_count) + " over " +
                    std::to_string(global.pairs_checked) + " pairs each"};
}

Outcome criterion3() {
  const IdentityReport rep = check_boxed_identities(100000, 42);
  const bool pass = rep.pairs == 100000 && rep.max_triple_rel_err <= 1e-9 && rep.max_cross_rel_err <= 1e-9 &&
                    rep.max_delta_rel_err <= 1e-6;
  return {pass, fmt("triple rel err %.2e", rep.max_triple_rel_err) + fmt(", cross rel err %.2e", rep.max_cross_rel_err) +
                    fmt(", delta rel err %.2e", rep.max_delta_rel_err) +
                    fmt(", min delta/(d2^4 L^2) %.3g", rep.min_delta_scaled) + " over 100000 pairs"};
}

Outcome criterion4() {
  const QuarticCertificate cert = certify_quartic(1'000'000);
  const bool pass = cert.ok() && cert.runtime_ms < 10'000.0;
  return {pass, std::to_string(cert.coefficients_checked) + " coefficients, " +
                    (cert.first_negative ? "negative at n=" + std::to_string(cert.first_negative->first)
                                         : std::string("none negative")) +
                    fmt(", %.2fs", cert.runtime_ms / 1000)};
}

Outcome criterion5() {
  const auto grid = geometric_grid(32, 1e6, 4000);
  const CosLemmaReport rep = check_cos_lemma(grid, 1.03);
  const double limit = std::numbers::pi * std::numbers::pi / 9.0;
  const double gap = std::abs(cos_lemma_phi(1e6) - limit);
  const bool pass = rep.ok() && gap <= 1e-4;
  return {pass, fmt("phi(32)=%.7f", rep.phi.front()) + fmt(", phi(1e6)=%.7f", rep.phi.back()) +
                    fmt(", |phi(1e6)-pi^2/9|=%.2e", gap) + (rep.nondecreasing ? ", nondecreasing" : ", NOT monotone") +
                    " on " + std::to_string(grid.size()) + " grid points"};
}

Outcome criterion6() {
  const GapBoundReport rep = check_one_minus_c_bound(32, 4096);
  return {rep.ok() && rep.checked == 4096 - 32 + 1,
          std::to_string(rep.checked) + " rings, " + std::to_string(rep.failures.size()) + " failures" +
              fmt(", min (1-c)/bound = %.6f", rep.min_ratio)};
}

Outcome criterion7() {
  constexpr int kSets = 50;
  constexpr double r = 0.5;
  constexpr double kDisk = 10.0;
  std::size_t lemma_fail = 0, congruence_fail = 0, cylinders = 0, aggregate_fail = 0;
  double worst_gap = std::numeric_limits<double>::infinity();
  double max_z = 0.0;
  for (int s = 0; s < kSets; ++s) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(s);
    const auto pts = random_separated_points(kDisk, 2 * r, 1500, seed);
    double R = 0;
    for (const auto& p : pts) R = std::max(R, p.radial());
    const double T = std::pow(R, 4) / (8 * r * r);
    const Lemma1Report lem = lemma1_certificate(pts, r, T);
    if (!lem.ok()) ++lemma_fail;
    worst_gap = std::min(worst_gap, lem.min_distance - lem.distance_bound);
    const CongruenceReport con =
        congruence_check(pts, r, 1.0 / T, FamilyKind::local, kDisk, 1'000'000, seed);
    congruence_fail += con.failing.size();
    if (!con.aggregate_ok()) ++aggregate_fail;
    cylinders += con.cylinders;
    max_z = std::max(max_z, con.max_z);
  }
  const bool pass = lemma_fail == 0 && congruence_fail == 0;
  return {pass, std::to_string(kSets) + " sets: lemma failures=" + std::to_string(lemma_fail) +
                    fmt(", min(dist - 2r(1-1/T))=%.3e", worst_gap) + "; congruence: " +
                    std::to_string(congruence_fail) + "/" + std::to_string(cylinders) + " cylinders beyond 4 sigma" +
                    fmt(", max z=%.2f", max_z) + ", aggregate beyond 2 sigma in " + std::to_string(aggregate_fail) +
                    " sets (informational)"};
}

Outcome criterion8() {
  bool pass = true;
  std::string detail;
  for (int m = 5; m <= 11; ++m) {
    const std::int64_t closed = (std::int64_t{1} << (2 * m + 1)) + 6 * (std::int64_t{1} << m) - 2048;
    const auto enumerated = static_cast<std::int64_t>(build_set(1 << m).size());
    pass = pass && enumerated == closed && closed_form_count(m) == closed;
  }
  const double ratio = point_density(2048) * std::numbers::pi / 2.0;
  pass = pass && std::abs(ratio - 1.0) <= 0.01;
  detail = "counts exact for m=5..11" + std::string(pass ? "" : " (mismatch)") +
           fmt(", point_density(2048)*pi/2=%.6f", ratio);
  return {pass, detail};
}

Outcome criterion9() {
  const std::vector<int> rs{128, 256, 512};
  const auto rows = global_density_series(rs, 10'000'000, 42);
  const SeriesRow& last = rows.back();
  const double law_gap = std::abs(last.perpendicular.density - last.product_law);
  const bool law_ok = law_gap <= 0.03;

  bool trend_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = rows[i].perpendicular.density;
    if (d > 0.5) trend_ok = false;
    if (i > 0) {
      const double prev = rows[i - 1].perpendicular.density;
      if (!(d > prev) || !(std::abs(d - 0.5) < std::abs(prev - 0.5))) trend_ok = false;
    }
  }
  bool congruent = true;
  for (const SeriesRow& row : rows) congruent = congruent && row.congruence_z <= 5.0;

  std::string detail = fmt("R=512 perp %.5f", last.perpendicular.density) + fmt(" vs product law %.5f", last.product_law) +
                       fmt(" (gap %.4f)", law_gap) + (law_ok ? " ok" : " FAIL") + "; series perp/tilted:";
  for (const SeriesRow& row : rows) {
    detail += " R=" + std::to_string(row.R) + fmt(" %.5f", row.perpendicular.density) +
              fmt("/%.5f", row.tilted.density) + fmt(" (z=%.2f)", row.congruence_z);
  }
  detail += trend_ok ? "; monotone approach to 0.5 from below" : "; NOT a monotone approach to 0.5 from below";
  detail += congruent ? "; congruent within 5 sigma" : "; congruence FAIL";
  return {law_ok && trend_ok && congruent, detail};
}

Outcome criterion10() {
  // Library level: repeated estimates and their serialization.
  const CylinderFamily fam = global_family(build_set(128));
  RunConfig cfg;
  cfg.command = "density";
  cfg.R = 128;
  cfg.samples = 1'000'000;
  cfg.seed = 42;
  std::vector<std::string> outputs;
  for (unsigned threads : {1u, 1u, 4u}) {
    const DensityEstimate e = covered_volume(fam, 128, 1'000'000, 42, threads);
    outputs.push_back(density_to_json(e).dump() + density_csv(std::span(&e, 1), cfg));
  }
  const bool lib_ok = outputs[0] == outputs[1] && outputs[0] == outputs[2];

  // Command level: complete report files.
  const std::vector<std::string> args{"density", "--family", "global", "--R", "128", "--samples", "1000000",
                                      "--seed", "42", "--threads", "2"};
  std::ostringstream a, b, err;
  const int ca = run(args, a, err);
  const int cb = run(args, b, err);
  const bool cli_ok = ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty();
  return {lib_ok && cli_ok, std::string("library reports ") + (lib_ok ? "identical" : "DIFFER") +
                                " across repeats and worker counts; CLI report files " +
                                (cli_ok ? "byte-identical" : "DIFFER") + " (" + std::to_string(a.str().size()) +
                                " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"optimal minimum distance", criterion1},
      {"non-parallelism", criterion2},
      {"algebraic identity suite", criterion3},
      {"exact coefficient certificate", criterion4},
      {"cosine lemma", criterion5},
      {"angular gap inequality", criterion6},
      {"lemma 1 and congruence", criterion7},
      {"point density", criterion8},
      {"global density 1/2", criterion9},
      {"determinism", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
