#include "cylpack/cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cylpack/certifier.hpp"
#include "cylpack/density.hpp"
#include "cylpack/lemmas.hpp"
#include "cylpack/line_families.hpp"
#include "cylpack/point_lattice.hpp"
#include "cylpack/report_io.hpp"

namespace cylpack {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raw flag values shared by all subcommands.
struct Flags {
  std::string family = "global";
  int R = 0;
  double L = kDefaultL;
  double r = 0.5;
  std::string eps = "auto";
  std::uint64_t samples = 10'000'000;
  std::uint64_t seed = 42;
  std::string mode = "exhaustive";
  unsigned threads = 0;
  std::string out;
  std::string format;
  std::string which = "all";
  std::int64_t n_max = 1'000'000;
  double z_max = 1000.0;
  std::size_t steps = 1001;
  bool force = false;
  std::uint64_t pairs = 1'000'000;
  std::optional<double> threshold;
  std::vector<int> series;
  bool congruence = false;
  std::string check = "packing";
  double x_max = 1e6;
  std::size_t grid = 2000;
  int d_max = 4096;
  double disk = 10.0;
  std::optional<double> T;
};

std::optional<double> parse_eps(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v > 0.0)) throw UsageError("--eps must be a positive number or 'auto', got '" + s + "'");
  return v;
}

FamilyKind family_kind(const Flags& f) {
  const auto k = parse_family_kind(f.family);
  if (!k) throw UsageError("unknown family '" + f.family + "' (expected perp, local or global)");
  return *k;
}

OutputFormat output_format(const Flags& f, OutputFormat fallback, std::initializer_list<OutputFormat> allowed) {
  if (f.format.empty()) return fallback;
  const auto fmt = parse_output_format(f.format);
  if (!fmt || std::find(allowed.begin(), allowed.end(), *fmt) == allowed.end()) {
    throw UsageError("format '" + f.format + "' is not available for this command");
  }
  return *fmt;
}

void require_ring_R(int R) {
  if (R < kFirstRing) throw UsageError("--R must be an integer >= 32");
}

RunConfig base_config(const std::string& command, const Flags& f, OutputFormat fmt) {
  RunConfig cfg;
  cfg.command = command;
  cfg.R = f.R;
  cfg.L = f.L;
  cfg.r = f.r;
  cfg.eps = f.eps;
  cfg.seed = f.seed;
  cfg.threads = f.threads;
  cfg.out_path = f.out;
  cfg.format = fmt;
  return cfg;
}

CylinderFamily make_family(FamilyKind kind, std::span<const PlanarPoint> pts, const Flags& f) {
  switch (kind) {
    case FamilyKind::perpendicular:
      return perpendicular_family(pts, f.r);
    case FamilyKind::local:
      return local_family(pts, f.r, parse_eps(f.eps));
    case FamilyKind::global:
      return global_family(pts, f.L);
  }
  throw UsageError("unknown family");
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void emit(const Flags& f, const std::string& content) {
    if (f.out.empty()) {
      out_ << content;
    } else {
      write_output(f.out, content);
    }
  }

  void emit_json(const Flags& f, const RunConfig& cfg, ojson body) {
    ojson doc{{"run_config", to_json(cfg)}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    emit(f, doc.dump(2) + "\n");
  }

  int rings(const Flags& f) {
    require_ring_R(f.R);
    const OutputFormat fmt = output_format(f, OutputFormat::csv, {OutputFormat::csv, OutputFormat::json});
    const RunConfig cfg = base_config("rings", f, fmt);
    if (fmt == OutputFormat::csv) {
      emit(f, points_csv(build_set(f.R), cfg));
      return kExitOk;
    }
    ojson rings = ojson::array();
    for (int d = kFirstRing; d <= f.R; ++d) {
      const int m = ring_exponent(d);
      rings.push_back({{"d", d}, {"m", m}, {"count", std::int64_t{6} << m}});
    }
    ojson body{{"count", count_up_to(f.R)}, {"point_density", point_density(f.R)}};
    if (std::has_single_bit(static_cast<unsigned>(f.R))) body["closed_form_count"] = closed_form_count(ring_exponent(f.R));
    body["rings"] = std::move(rings);
    emit_json(f, cfg, std::move(body));
    return kExitOk;
  }

  int construct(const Flags& f) {
    require_ring_R(f.R);
    const FamilyKind kind = family_kind(f);
    const OutputFormat fmt = output_format(f, OutputFormat::json, {OutputFormat::json});
    RunConfig cfg = base_config("construct", f, fmt);
    cfg.family = std::string(to_string(kind));
    const auto pts = build_set(f.R);
    emit_json(f, cfg, {{"family", family_to_json(make_family(kind, pts, f))}});
    return kExitOk;
  }

  int verify(const Flags& f) {
    require_ring_R(f.R);
    const FamilyKind kind = family_kind(f);
    const OutputFormat fmt = output_format(f, OutputFormat::json, {OutputFormat::json});
    const auto mode = parse_verify_mode(f.mode);
    if (!mode) throw UsageError("--mode must be exhaustive or sampled");
    if (f.check != "packing" && f.check != "nonparallel") throw UsageError("--check must be packing or nonparallel");
    if (*mode == VerifyMode::sampled && f.pairs == 0) throw UsageError("--pairs must be positive");

    RunConfig cfg = base_config("verify", f, fmt);
    cfg.family = std::string(to_string(kind));
    cfg.mode = std::string(to_string(*mode));
    cfg.extra.emplace_back("check", f.check);
    if (*mode == VerifyMode::sampled) cfg.extra.emplace_back("pairs", std::to_string(f.pairs));
    if (f.threshold) cfg.extra.emplace_back("threshold", format_double(*f.threshold));
    if (f.force) cfg.extra.emplace_back("force", "true");

    const auto pts = build_set(f.R);
    const CylinderFamily fam = make_family(kind, pts, f);
    VerifyConfig vc;
    vc.threshold = f.threshold;
    vc.mode = *mode;
    vc.sample_pairs = f.pairs;
    vc.seed = f.seed;
    vc.force = f.force;
    vc.threads = f.threads;
    const bool nonparallel = f.check == "nonparallel";
    const VerificationReport rep = nonparallel ? verify_nonparallel(fam, vc) : verify_packing(fam, vc);
    emit_json(f, cfg, {{"report", report_to_json(rep, fam)}});
    const bool ok = nonparallel ? rep.parallel_count == 0 : rep.ok();
    if (!ok) err_ << "verify: check failed\n";
    return ok ? kExitOk : kExitFailed;
  }

  int density(const Flags& f) {
    const OutputFormat fmt = output_format(f, OutputFormat::json, {OutputFormat::json, OutputFormat::csv});
    if (f.samples < kMinDensitySamples) throw UsageError("--samples must be at least 10000");
    RunConfig cfg = base_config("density", f, fmt);
    cfg.samples = f.samples;

    if (!f.series.empty()) {
      std::string list;
      for (int R : f.series) list += (list.empty() ? "" : ",") + std::to_string(R);
      cfg.family = "perp+global";
      cfg.extra.emplace_back("series", list);
      const auto rows = global_density_series(f.series, f.samples, f.seed, f.L, f.threads);
      if (fmt == OutputFormat::csv) {
        std::vector<DensityEstimate> flat;
        for (const SeriesRow& row : rows) {
          flat.push_back(row.perpendicular);
          flat.push_back(row.tilted);
        }
        emit(f, density_csv(flat, cfg));
      } else {
        emit_json(f, cfg, {{"series", series_to_json(rows)}});
      }
      return kExitOk;
    }

    require_ring_R(f.R);
    const FamilyKind kind = family_kind(f);
    cfg.family = std::string(to_string(kind));
    const auto pts = build_set(f.R);
    if (f.congruence) {
      if (kind == FamilyKind::perpendicular) throw UsageError("--congruence needs --family local or global");
      if (fmt != OutputFormat::json) throw UsageError("--congruence reports are JSON only");
      cfg.extra.emplace_back("congruence", "true");
      const std::optional<double> param = kind == FamilyKind::local ? parse_eps(f.eps) : std::optional<double>(f.L);
      const CongruenceReport rep = congruence_check(pts, f.r, param, kind, f.R, f.samples, f.seed, f.threads);
      emit_json(f, cfg, {{"congruence", congruence_to_json(rep)}});
      if (!rep.per_cylinder_ok()) err_ << "density: congruence check failed\n";
      return rep.per_cylinder_ok() ? kExitOk : kExitFailed;
    }
    const DensityEstimate est = covered_volume(make_family(kind, pts, f), f.R, f.samples, f.seed, f.threads);
    if (fmt == OutputFormat::csv) {
      emit(f, density_csv(std::span(&est, 1), cfg));
    } else {
      emit_json(f, cfg, {{"estimate", density_to_json(est)}});
    }
    return kExitOk;
  }

  int lemmas(const Flags& f) {
    const OutputFormat fmt = output_format(f, OutputFormat::json, {OutputFormat::json});
    static const std::vector<std::string> kAll{"quartic", "cos", "gap", "lemma1", "identities"};
    std::vector<std::string> selected;
    if (f.which == "all") {
      selected = kAll;
    } else if (std::find(kAll.begin(), kAll.end(), f.which) != kAll.end()) {
      selected = {f.which};
    } else {
      throw UsageError("--which must be one of quartic, cos, gap, lemma1, identities, all");
    }
    RunConfig cfg = base_config("lemmas", f, fmt);
    cfg.extra.emplace_back("which", f.which);

    ojson body = ojson::object();
    bool ok = true;
    const auto wants = [&](const char* name) { return std::find(selected.begin(), selected.end(), name) != selected.end(); };
    if (wants("quartic")) {
      if (f.n_max < 0) throw UsageError("--n-max must be >= 0");
      cfg.extra.emplace_back("n_max", std::to_string(f.n_max));
      const QuarticCertificate cert = certify_quartic(f.n_max, f.threads);
      body["quartic"] = quartic_to_json(cert);
      ok = ok && cert.ok();
    }
    if (wants("cos")) {
      if (!(f.x_max >= kFirstRing) || f.grid < 2) throw UsageError("--x-max must be >= 32 and --grid >= 2");
      cfg.extra.emplace_back("x_max", format_double(f.x_max));
      cfg.extra.emplace_back("grid", std::to_string(f.grid));
      const auto grid = geometric_grid(kFirstRing, f.x_max, f.grid);
      const CosLemmaReport rep = check_cos_lemma(grid);
      body["cos"] = cos_lemma_to_json(rep);
      ok = ok && rep.ok();
    }
    if (wants("gap")) {
      if (f.d_max < kFirstRing) throw UsageError("--d-max must be >= 32");
      cfg.extra.emplace_back("d_max", std::to_string(f.d_max));
      const GapBoundReport rep = check_one_minus_c_bound(kFirstRing, f.d_max, f.L);
      body["gap"] = gap_bound_to_json(rep);
      ok = ok && rep.ok();
    }
    if (wants("lemma1")) {
      if (!(f.disk > 0.0) || !(f.r > 0.0)) throw UsageError("--disk and --r must be positive");
      cfg.extra.emplace_back("disk", format_double(f.disk));
      const auto pts = random_separated_points(f.disk, 2.0 * f.r, 4000, f.seed);
      double R = 0.0;
      for (const PlanarPoint& p : pts) R = std::max(R, p.radial());
      const double T = f.T.value_or(std::pow(R, 4) / (8.0 * f.r * f.r));
      if (f.T) cfg.extra.emplace_back("T", format_double(*f.T));
      const Lemma1Report rep = lemma1_certificate(pts, f.r, T);
      body["lemma1"] = lemma1_to_json(rep);
      ok = ok && rep.ok();
    }
    if (wants("identities")) {
      cfg.extra.emplace_back("pairs", std::to_string(f.pairs));
      const IdentityReport rep = check_boxed_identities(f.pairs, f.seed, f.d_max, f.L, f.threads);
      ojson j = identities_to_json(rep);
      const bool pass = rep.max_triple_rel_err <= 1e-9 && rep.max_cross_rel_err <= 1e-9 &&
                        rep.max_delta_rel_err <= 1e-6 && rep.min_delta_scaled >= -1e-6;
      j["ok"] = pass;
      body["identities"] = std::move(j);
      ok = ok && pass;
    }
    body["ok"] = ok;
    emit_json(f, cfg, std::move(body));
    if (!ok) err_ << "lemmas: a certificate failed\n";
    return ok ? kExitOk : kExitFailed;
  }

  int hole(const Flags& f) {
    require_ring_R(f.R);
    const OutputFormat fmt = output_format(f, OutputFormat::json, {OutputFormat::json, OutputFormat::csv});
    if (!(f.z_max > 0.0) || f.steps == 0) throw UsageError("--z-max must be positive and --steps >= 1");
    RunConfig cfg = base_config("hole", f, fmt);
    cfg.family = "global";
    cfg.extra.emplace_back("z_max", format_double(f.z_max));
    cfg.extra.emplace_back("steps", std::to_string(f.steps));
    const auto pts = build_set(f.R);
    const ClearanceProfile prof = axis_clearance(global_family(pts, f.L), f.z_max, f.steps, f.threads);
    if (fmt == OutputFormat::csv) {
      emit(f, clearance_csv(prof, cfg));
    } else {
      emit_json(f, cfg, {{"clearance", clearance_to_json(prof)}});
    }
    return kExitOk;
  }

  int figure(const Flags& f) {
    require_ring_R(f.R);
    const OutputFormat fmt = output_format(f, OutputFormat::svg, {OutputFormat::svg});
    const RunConfig cfg = base_config("figure", f, fmt);
    emit(f, figure_svg(build_set(f.R), cfg));
    return kExitOk;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Nonparallel cylinder packing constructions and certificates", "cylpack"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--R", f.R, "Truncation radius (integer)");
    sub->add_option("--out", f.out, "Output file (default: stdout)");
    sub->add_option("--format", f.format, "Output format: json, csv or svg");
    sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    sub->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  };
  auto family_opts = [&](CLI::App* sub) {
    sub->add_option("--family", f.family, "perp, local or global")->capture_default_str();
    sub->add_option("--L", f.L, "Slope constant of the global family (>= 6)")->capture_default_str();
    sub->add_option("--r", f.r, "Cylinder radius of the perpendicular/local family")->capture_default_str();
    sub->add_option("--eps", f.eps, "Tilt of the local family: a number or 'auto'")->capture_default_str();
  };

  CLI::App* rings = app.add_subcommand("rings", "Enumerate the ring set");
  CLI::App* construct = app.add_subcommand("construct", "Build a cylinder family and export its axes");
  CLI::App* verify = app.add_subcommand("verify", "Certify pairwise axis distances");
  CLI::App* density = app.add_subcommand("density", "Monte Carlo local density");
  CLI::App* lemmas = app.add_subcommand("lemmas", "Run the lemma certificates");
  CLI::App* hole = app.add_subcommand("hole", "Clearance of the global family along the z axis");
  CLI::App* figure = app.add_subcommand("figure", "SVG scatter of the ring set");

  for (CLI::App* sub : {rings, construct, verify, density, lemmas, hole, figure}) common(sub);
  for (CLI::App* sub : {construct, verify, density, lemmas}) family_opts(sub);
  hole->add_option("--L", f.L, "Slope constant (>= 6)")->capture_default_str();

  verify->add_option("--mode", f.mode, "exhaustive or sampled")->capture_default_str();
  verify->add_option("--pairs", f.pairs, "Pairs drawn in sampled mode")->capture_default_str();
  verify->add_option("--threshold", f.threshold, "Minimum admissible distance (default 2 * radius)");
  verify->add_flag("--force", f.force, "Allow exhaustive runs above the pair budget");
  verify->add_option("--check", f.check, "packing or nonparallel")->capture_default_str();

  density->add_option("--samples", f.samples, "Monte Carlo samples")->capture_default_str();
  density->add_option("--series", f.series, "Comma-separated R list for the global density series")->delimiter(',');
  density->add_flag("--congruence", f.congruence, "Per-cylinder tilted vs perpendicular volumes");

  lemmas->add_option("--which", f.which, "quartic, cos, gap, lemma1, identities or all")->capture_default_str();
  lemmas->add_option("--n-max", f.n_max, "Largest n for the quartic certificate")->capture_default_str();
  lemmas->add_option("--x-max", f.x_max, "Upper end of the phi grid")->capture_default_str();
  lemmas->add_option("--grid", f.grid, "Number of phi grid points")->capture_default_str();
  lemmas->add_option("--d-max", f.d_max, "Largest ring radius for gap and identity checks")->capture_default_str();
  lemmas->add_option("--pairs", f.pairs, "Random pairs for the identity check")->capture_default_str();
  lemmas->add_option("--disk", f.disk, "Disk radius of the random point set")->capture_default_str();
  lemmas->add_option("--T", f.T, "Slope parameter T (default R^4 / (8 r^2))");

  hole->add_option("--z-max", f.z_max, "Largest height probed")->capture_default_str();
  hole->add_option("--steps", f.steps, "Number of heights")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  const std::string sub_name = args.empty() ? "" : args.front();
  // Per-command defaults, applied before parsing so explicit flags override them.
  if (sub_name == "rings" || sub_name == "figure") f.R = 150;
  if (sub_name == "construct" || sub_name == "verify") f.R = 96;
  if (sub_name == "density") f.R = 512;
  if (sub_name == "hole") f.R = 64;
  if (sub_name == "lemmas") f.pairs = 100'000;

  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Runner runner(out, err);
  try {
    if (*rings) return runner.rings(f);
    if (*construct) return runner.construct(f);
    if (*verify) return runner.verify(f);
    if (*density) return runner.density(f);
    if (*lemmas) return runner.lemmas(f);
    if (*hole) return runner.hole(f);
    if (*figure) return runner.figure(f);
  } catch (const PairBudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace cylpack
