#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cylpack/line_families.hpp"

namespace cylpack {

enum class VerifyMode { exhaustive, sampled };

std::string_view to_string(VerifyMode mode);
std::optional<VerifyMode> parse_verify_mode(std::string_view s);

struct VerifyConfig {
  /// Minimum admissible axis distance; defaults to 2 * family radius.
  std::optional<double> threshold;
  /// A pair is a violation when its distance is below threshold - slack.
  double slack = 1e-9;
  double parallel_tol = 1e-12;
  VerifyMode mode = VerifyMode::exhaustive;
  /// Number of random pairs in sampled mode (drawn with replacement).
  std::uint64_t sample_pairs = 1'000'000;
  std::uint64_t seed = 42;
  /// Exhaustive runs above this many pairs are refused unless `force` is set.
  std::uint64_t pair_budget = 500'000'000;
  bool force = false;
  unsigned threads = 0;
  /// Cap on the number of violations / parallel pairs listed in a report.
  /// Counts are always exact.
  std::size_t max_listed = 1000;
};

class PairBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PairRecord {
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;
};

struct VerificationReport {
  FamilyKind kind = FamilyKind::perpendicular;
  int truncation_R = 0;
  std::size_t lines = 0;
  std::uint64_t pairs_checked = 0;
  /// +infinity when no pair was checked.
  double min_distance = 0.0;
  std::optional<PairRecord> argmin;
  double threshold = 0.0;
  double slack = 0.0;
  bool distance_checked = true;
  std::vector<PairRecord> violations;
  std::uint64_t violation_count = 0;
  std::vector<PairRecord> parallel_pairs;
  std::uint64_t parallel_count = 0;
  double runtime_ms = 0.0;
  VerifyMode mode = VerifyMode::exhaustive;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  bool ok() const { return violation_count == 0; }
};

/// Checks every pair (or a seeded random sample of pairs) of axes against the
/// threshold. The result does not depend on the worker count.
/// Throws PairBudgetExceeded for oversize exhaustive runs without `force`.
VerificationReport verify_packing(const CylinderFamily& family, const VerifyConfig& config = {});

/// Lists every pair of parallel axes (exhaustive; `mode` is ignored).
VerificationReport verify_nonparallel(const CylinderFamily& family, const VerifyConfig& config = {});

}  // namespace cylpack
