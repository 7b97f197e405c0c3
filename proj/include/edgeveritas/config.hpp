#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include "edgeveritas/calibrate.hpp"
#include "edgeveritas/classify.hpp"
#include "edgeveritas/degrade.hpp"
#include "edgeveritas/scoring.hpp"
#include "json.hpp"

namespace edgeveritas {

/// Every tunable the pipeline reads. Serialized into each report so results
/// never depend on unstated parameters. Thread count is deliberately absent:
/// outputs are identical for any worker count.
struct RunConfig {
  ScoringOptions scoring;
  CenterStrategy strategy = CenterStrategy::median;
  OrientationMode orientation = OrientationMode::recorded;
  std::size_t bins = kHistogramBins;
  std::uint64_t seed = 0;
  std::map<DegradationKind, DegradationSpec> degradations = default_degradations(0);

  static std::map<DegradationKind, DegradationSpec> default_degradations(std::uint64_t seed);

  /// Degradation parameters for `kind` with the run seed applied.
  DegradationSpec degradation(DegradationKind kind) const;
};

nlohmann::json to_json(const RunConfig& config);

/// Overlays the keys present in `json` onto `config`. Unknown keys and values
/// of the wrong type raise Error{UsageError}.
void merge_config(RunConfig& config, const nlohmann::json& json);

}  // namespace edgeveritas
