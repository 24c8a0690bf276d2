#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylpack/certifier.hpp"
#include "cylpack/density.hpp"
#include "cylpack/lemmas.hpp"
#include "cylpack/line_families.hpp"
#include "cylpack/point_lattice.hpp"

namespace cylpack {

enum class OutputFormat { json, csv, svg };

std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_output_format(std::string_view s);

/// Everything needed to reproduce a run. Embedded in every emitted file.
struct RunConfig {
  std::string command;
  std::string family;
  int R = 0;
  double L = kDefaultL;
  double r = 0.5;
  /// "auto" or a decimal literal, as given on the command line.
  std::string eps = "auto";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string mode;
  unsigned threads = 0;
  std::string out_path;
  OutputFormat format = OutputFormat::json;
  /// Command-specific settings (n-max, z-max, series list, ...), in flag order.
  std::vector<std::pair<std::string, std::string>> extra;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Single-line JSON form of the config, used in CSV and SVG headers.
std::string config_line(const RunConfig& cfg);

nlohmann::ordered_json family_to_json(const CylinderFamily& family);

nlohmann::ordered_json report_to_json(const VerificationReport& report, const CylinderFamily& family);

nlohmann::ordered_json density_to_json(const DensityEstimate& est);
nlohmann::ordered_json congruence_to_json(const CongruenceReport& rep);
nlohmann::ordered_json series_to_json(std::span<const SeriesRow> rows);
nlohmann::ordered_json clearance_to_json(const ClearanceProfile& prof);

nlohmann::ordered_json quartic_to_json(const QuarticCertificate& cert);
nlohmann::ordered_json cos_lemma_to_json(const CosLemmaReport& rep);
nlohmann::ordered_json gap_bound_to_json(const GapBoundReport& rep);
nlohmann::ordered_json lemma1_to_json(const Lemma1Report& rep);
nlohmann::ordered_json identities_to_json(const IdentityReport& rep);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// CSV with header `d,m,k,x,y`; points without ring provenance leave d,m,k empty.
std::string points_csv(std::span<const PlanarPoint> points, const RunConfig& cfg);

/// CSV with header `R,family,density,std_error,samples,seed`.
std::string density_csv(std::span<const DensityEstimate> rows, const RunConfig& cfg);

/// CSV with header `z,clearance`; infinite clearance is written as `unbounded`.
std::string clearance_csv(const ClearanceProfile& prof, const RunConfig& cfg);

/// Standalone SVG scatter of the points, origin at the centre, scaled so the
/// disk of the largest point radius fills the canvas.
/// Throws std::invalid_argument for an empty point list.
std::string figure_svg(std::span<const PlanarPoint> points, const RunConfig& cfg);

/// Writes `content` to `path`, or to stdout when `path` is empty.
/// Throws std::runtime_error if the file cannot be written.
void write_output(const std::filesystem::path& path, const std::string& content);

}  // namespace cylpack
