#include "cylpack/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace cylpack {

namespace {

using ojson = nlohmann::ordered_json;

// Non-finite values are not valid JSON numbers.
ojson num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

ojson vec_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }

ojson ring_fields(const CylinderFamily& fam, std::size_t i, const char* suffix) {
  ojson out = ojson::object();
  const auto& ring = fam.base_points[i].ring;
  out[std::string("d") + suffix] = ring ? ojson(ring->d) : ojson(nullptr);
  out[std::string("k") + suffix] = ring ? ojson(ring->k) : ojson(nullptr);
  return out;
}

ojson pair_json(const CylinderFamily& fam, const PairRecord& p) {
  ojson out{{"i", p.i}, {"j", p.j}};
  out.update(ring_fields(fam, p.i, "1"));
  out.update(ring_fields(fam, p.j, "2"));
  out["distance"] = num(p.distance);
  return out;
}

ojson pair_list(const CylinderFamily& fam, const std::vector<PairRecord>& list) {
  ojson out = ojson::array();
  for (const auto& p : list) out.push_back(pair_json(fam, p));
  return out;
}

std::string csv_header(const RunConfig& cfg) { return "# config: " + config_line(cfg) + "\n"; }

}  // namespace

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json:
      return "json";
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::svg:
      return "svg";
  }
  return "json";
}

std::optional<OutputFormat> parse_output_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "svg") return OutputFormat::svg;
  return std::nullopt;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ojson to_json(const RunConfig& cfg) {
  ojson out{{"command", cfg.command}};
  if (!cfg.family.empty()) out["family"] = cfg.family;
  out["R"] = cfg.R;
  out["L"] = cfg.L;
  out["r"] = cfg.r;
  out["eps"] = cfg.eps;
  out["samples"] = cfg.samples;
  out["seed"] = cfg.seed;
  if (!cfg.mode.empty()) out["mode"] = cfg.mode;
  out["threads"] = cfg.threads;
  out["out"] = cfg.out_path;
  out["format"] = std::string(to_string(cfg.format));
  for (const auto& [k, v] : cfg.extra) out[k] = v;
  return out;
}

std::string config_line(const RunConfig& cfg) { return to_json(cfg).dump(); }

ojson family_to_json(const CylinderFamily& fam) {
  const auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
  ojson out{{"kind", std::string(to_string(fam.kind))},
            {"radius", fam.radius},
            {"params",
             {{"L", opt(fam.params.L)},
              {"K", opt(fam.params.K)},
              {"r", opt(fam.params.r)},
              {"eps", opt(fam.params.eps)},
              {"T", opt(fam.params.T)}}}};
  if (fam.params.unsafe) out["unsafe"] = true;
  ojson lines = ojson::array();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& ring = fam.base_points[i].ring;
    lines.push_back({{"base", vec_json(fam.lines[i].base())},
                     {"dir", vec_json(fam.lines[i].dir())},
                     {"d", ring ? ojson(ring->d) : ojson(nullptr)},
                     {"m", ring ? ojson(ring->m) : ojson(nullptr)},
                     {"k", ring ? ojson(ring->k) : ojson(nullptr)}});
  }
  out["lines"] = std::move(lines);
  return out;
}

ojson report_to_json(const VerificationReport& rep, const CylinderFamily& fam) {
  ojson out{{"kind", std::string(to_string(rep.kind))},
            {"R", rep.truncation_R},
            {"lines", rep.lines},
            {"pairs_checked", rep.pairs_checked},
            {"min_distance", rep.argmin ? num(rep.min_distance) : ojson(nullptr)}};
  if (rep.argmin) {
    ojson a{{"i", rep.argmin->i}, {"j", rep.argmin->j}};
    const auto& r1 = fam.base_points[rep.argmin->i].ring;
    const auto& r2 = fam.base_points[rep.argmin->j].ring;
    a["d1"] = r1 ? ojson(r1->d) : ojson(nullptr);
    a["d2"] = r2 ? ojson(r2->d) : ojson(nullptr);
    a["k1"] = r1 ? ojson(r1->k) : ojson(nullptr);
    a["k2"] = r2 ? ojson(r2->k) : ojson(nullptr);
    out["argmin"] = std::move(a);
  } else {
    out["argmin"] = nullptr;
  }
  out["violation_count"] = rep.violation_count;
  out["violations"] = pair_list(fam, rep.violations);
  out["parallel_count"] = rep.parallel_count;
  out["parallel_pairs"] = pair_list(fam, rep.parallel_pairs);
  out["runtime_ms"] = rep.runtime_ms;
  // Only L = 7 carries the exact coefficient certificate.
  if (fam.kind == FamilyKind::global) {
    out["exact_certificate"] = !fam.params.unsafe && fam.params.L && *fam.params.L == 7.0;
  }
  out["ok"] = rep.ok();
  out["config"] = {{"threshold", rep.threshold},
                   {"slack", rep.slack},
                   {"mode", std::string(to_string(rep.mode))},
                   {"seed", rep.seed},
                   {"threads", rep.threads},
                   {"distance_checked", rep.distance_checked}};
  return out;
}

ojson density_to_json(const DensityEstimate& est) {
  return {{"R", est.R},
          {"family", std::string(to_string(est.family_kind))},
          {"density", est.density},
          {"covered_volume", est.covered_volume},
          {"std_error", est.std_error},
          {"samples", est.samples},
          {"hits", est.hits},
          {"seed", est.seed}};
}

ojson congruence_to_json(const CongruenceReport& rep) {
  ojson failing = ojson::array();
  for (std::size_t i : rep.failing) failing.push_back({{"index", i}, {"z", num(rep.z_scores[i])}});
  return {{"kind", std::string(to_string(rep.kind))},
          {"R", rep.R},
          {"cylinders", rep.cylinders},
          {"max_z", num(rep.max_z)},
          {"per_cylinder_sigma", rep.per_cylinder_sigma},
          {"failing", std::move(failing)},
          {"aggregate_z", num(rep.aggregate_z)},
          {"aggregate_sigma", rep.aggregate_sigma},
          {"per_cylinder_ok", rep.per_cylinder_ok()},
          {"aggregate_ok", rep.aggregate_ok()},
          {"tilted", density_to_json(rep.tilted)},
          {"perpendicular", density_to_json(rep.perpendicular)}};
}

ojson series_to_json(std::span<const SeriesRow> rows) {
  ojson out = ojson::array();
  for (const SeriesRow& row : rows) {
    out.push_back({{"R", row.R},
                   {"point_density", row.point_density},
                   {"product_law", row.product_law},
                   {"perpendicular", density_to_json(row.perpendicular)},
                   {"tilted", density_to_json(row.tilted)},
                   {"congruence_z", row.congruence_z}});
  }
  return out;
}

ojson clearance_to_json(const ClearanceProfile& prof) {
  ojson points = ojson::array();
  for (std::size_t k = 0; k < prof.z_values.size(); ++k) {
    const double c = prof.clearance[k];
    points.push_back({{"z", prof.z_values[k]}, {"clearance", std::isinf(c) ? ojson("unbounded") : ojson(c)}});
  }
  return {{"unbounded", prof.unbounded},
          {"max_clearance", prof.unbounded ? ojson("unbounded") : ojson(prof.max_clearance)},
          {"z_at_max", prof.z_at_max},
          {"profile", std::move(points)}};
}

ojson quartic_to_json(const QuarticCertificate& cert) {
  ojson out{{"n_max", cert.n_max}, {"coefficients_checked", cert.coefficients_checked}};
  if (cert.first_negative) {
    out["first_negative"] = {{"n", cert.first_negative->first}, {"degree", cert.first_negative->second}};
  } else {
    out["first_negative"] = nullptr;
  }
  out["runtime_ms"] = cert.runtime_ms;
  out["ok"] = cert.ok();
  return out;
}

ojson cos_lemma_to_json(const CosLemmaReport& rep) {
  ojson out{{"grid_points", rep.x.size()},
            {"x_min", rep.x.empty() ? 0.0 : rep.x.front()},
            {"x_max", rep.x.empty() ? 0.0 : rep.x.back()},
            {"phi_min", rep.phi.empty() ? 0.0 : rep.phi.front()},
            {"phi_max", rep.phi.empty() ? 0.0 : rep.phi.back()},
            {"bound", rep.bound},
            {"above_bound", rep.above_bound},
            {"nondecreasing", rep.nondecreasing},
            {"first_failure_x", rep.first_failure_x ? ojson(*rep.first_failure_x) : ojson(nullptr)},
            {"limit_gap", rep.limit_gap},
            {"ok", rep.ok()}};
  return out;
}

ojson gap_bound_to_json(const GapBoundReport& rep) {
  ojson failures = ojson::array();
  for (const auto& f : rep.failures) {
    if (failures.size() >= 1000) break;
    failures.push_back({{"d1", f.d1}, {"d2", f.d2}, {"one_minus_c", f.one_minus_c}, {"bound", f.bound}});
  }
  return {{"checked", rep.checked},
          {"skipped_same_angle", rep.skipped_same_angle},
          {"min_ratio", rep.min_ratio},
          {"failure_count", rep.failures.size()},
          {"failures", std::move(failures)},
          {"ok", rep.ok()}};
}

ojson lemma1_to_json(const Lemma1Report& rep) {
  ojson failures = ojson::array();
  for (const auto& f : rep.failures) {
    if (failures.size() >= 1000) break;
    failures.push_back({{"i", f.i}, {"j", f.j}, {"what", f.what}, {"value", num(f.value)}});
  }
  return {{"pairs", rep.pairs},
          {"R", rep.R},
          {"r", rep.r},
          {"T", rep.T},
          {"distance_bound", rep.distance_bound},
          {"min_distance", num(rep.min_distance)},
          {"max_triple_rel_err", rep.max_triple_rel_err},
          {"max_cross_rel_err", rep.max_cross_rel_err},
          {"precondition_failures", rep.precondition_failures},
          {"failure_count", rep.failures.size()},
          {"failures", std::move(failures)},
          {"ok", rep.ok()}};
}

ojson identities_to_json(const IdentityReport& rep) {
  return {{"pairs", rep.pairs},
          {"max_triple_rel_err", rep.max_triple_rel_err},
          {"max_cross_rel_err", rep.max_cross_rel_err},
          {"max_delta_rel_err", rep.max_delta_rel_err},
          {"min_delta_scaled", rep.min_delta_scaled},
          {"min_delta_prime", rep.min_delta_prime},
          {"min_distance", num(rep.min_distance)}};
}

std::string points_csv(std::span<const PlanarPoint> points, const RunConfig& cfg) {
  std::string out = csv_header(cfg) + "d,m,k,x,y\n";
  for (const PlanarPoint& p : points) {
    if (p.ring) {
      out += std::to_string(p.ring->d) + ',' + std::to_string(p.ring->m) + ',' + std::to_string(p.ring->k);
    } else {
      out += ",,";
    }
    out += ',' + format_double(p.x) + ',' + format_double(p.y) + '\n';
  }
  return out;
}

std::string density_csv(std::span<const DensityEstimate> rows, const RunConfig& cfg) {
  std::string out = csv_header(cfg) + "R,family,density,std_error,samples,seed\n";
  for (const DensityEstimate& e : rows) {
    out += format_double(e.R) + ',' + std::string(to_string(e.family_kind)) + ',' + format_double(e.density) + ',' +
           format_double(e.std_error) + ',' + std::to_string(e.samples) + ',' + std::to_string(e.seed) + '\n';
  }
  return out;
}

std::string clearance_csv(const ClearanceProfile& prof, const RunConfig& cfg) {
  std::string out = csv_header(cfg) + "z,clearance\n";
  for (std::size_t k = 0; k < prof.z_values.size(); ++k) {
    const double c = prof.clearance[k];
    out += format_double(prof.z_values[k]) + ',' + (std::isinf(c) ? std::string("unbounded") : format_double(c)) + '\n';
  }
  return out;
}

std::string figure_svg(std::span<const PlanarPoint> points, const RunConfig& cfg) {
  if (points.empty()) throw std::invalid_argument("figure: no points to draw");
  constexpr double kCanvas = 800.0;
  constexpr double kMarginPx = 10.0;
  constexpr double kDotPx = 1.2;
  double extent = 0.0;
  for (const PlanarPoint& p : points) extent = std::max(extent, std::hypot(p.x, p.y));
  if (extent == 0.0) extent = 1.0;
  // The viewBox is the disk of radius `extent` plus a margin, in plane units.
  const double half = extent * (kCanvas / 2.0) / (kCanvas / 2.0 - kMarginPx);
  const double dot = kDotPx * 2.0 * half / kCanvas;

  std::string comment = config_line(cfg);
  // "--" may not appear inside an XML comment.
  for (std::size_t pos = comment.find("--"); pos != std::string::npos; pos = comment.find("--", pos)) {
    comment.replace(pos, 2, "- -");
  }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- config: " << comment << " -->\n";
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"%.6f %.6f %.6f %.6f\">\n",
                -half, -half, 2.0 * half, 2.0 * half);
  os << buf;
  std::snprintf(buf, sizeof buf, "<rect x=\"%.6f\" y=\"%.6f\" width=\"%.6f\" height=\"%.6f\" fill=\"white\"/>\n",
                -half, -half, 2.0 * half, 2.0 * half);
  os << buf;
  os << "<g fill=\"black\">\n";
  for (const PlanarPoint& p : points) {
    // SVG y grows downward; adding 0.0 keeps -0 out of the output.
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\"/>\n", p.x, -p.y + 0.0, dot);
    os << buf;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_output(const std::filesystem::path& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace cylpack
