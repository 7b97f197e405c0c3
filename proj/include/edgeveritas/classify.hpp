#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeveritas/calibrate.hpp"
#include "edgeveritas/imgio.hpp"
#include "edgeveritas/labels.hpp"
#include "edgeveritas/scoring.hpp"
#include "json.hpp"

namespace edgeveritas {

enum class Stage { external, edge, refined };

std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> parse_stage(std::string_view text) noexcept;

/// `recorded` trusts the calibration's orientation; `paper_fixed` always
/// calls scores at or above the threshold fake.
enum class OrientationMode { recorded, paper_fixed };

std::string_view to_string(OrientationMode mode) noexcept;
std::optional<OrientationMode> parse_orientation_mode(std::string_view text) noexcept;

struct PredictionRecord {
  std::string id;
  Label pred = Label::real;
  std::optional<double> confidence;
  std::optional<Label> truth;
  Stage stage = Stage::external;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct PredictionSet {
  std::vector<PredictionRecord> records;
  std::string provenance;

  const PredictionRecord* find(std::string_view id) const;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

using TruthMap = std::map<std::string, Label, std::less<>>;

/// Labels of every labeled manifest entry.
TruthMap truth_from_manifest(const Manifest& manifest);

Label classify_score(double score, const CalibrationResult& calibration,
                     OrientationMode mode = OrientationMode::recorded);

/// Edge-stage predictions for already computed scores.
PredictionSet classify_scores(const std::vector<ScoreRecord>& scores,
                              const CalibrationResult& calibration,
                              OrientationMode mode = OrientationMode::recorded);

struct BatchResult {
  PredictionSet predictions;
  std::vector<ScoreRecord> scores;
  std::vector<ScoreFailure> failures;
};

/// Scores and classifies every manifest entry. Entries that fail to score are
/// listed in `failures` and left out of `predictions`.
/// Throws Error{EmptyDataset} for an empty manifest.
BatchResult classify_batch(const Manifest& manifest, const ScoringOptions& options,
                           const CalibrationResult& calibration,
                           OrientationMode mode = OrientationMode::recorded,
                           unsigned threads = 1);

/// The edge module's verdict for one image id.
using EdgeLabeler = std::function<Label(const std::string& id)>;

/// Builds an EdgeLabeler that looks ids up in `manifest` and scores the image.
/// Unknown ids raise Error{MissingImage}.
EdgeLabeler manifest_labeler(const Manifest& manifest, const ScoringOptions& options,
                             const CalibrationResult& calibration,
                             OrientationMode mode = OrientationMode::recorded);

struct RefineResult {
  PredictionSet predictions;
  std::size_t misclassified = 0;  // |M|, or the routed count when gating
  std::size_t corrected = 0;
};

/// Two-stage refinement. Records whose prediction disagrees with `truth` are
/// re-labeled by the edge module and marked `refined`; all others pass
/// through untouched. Throws Error{MissingTruth}.
RefineResult refine_predictions(const PredictionSet& stage1, const TruthMap& truth,
                                const EdgeLabeler& edge_label);

/// Truth-free variant: records with confidence below `min_confidence`, or no
/// confidence at all, are re-labeled by the edge module. `corrected` counts
/// changed labels that now agree with `truth` when truth is supplied.
RefineResult gate_by_confidence(const PredictionSet& stage1, double min_confidence,
                                const EdgeLabeler& edge_label,
                                const TruthMap* truth = nullptr);

/// Reads the predictions schema. Records default to stage `external`.
/// Throws Error{SchemaError} for missing fields, labels outside real|fake,
/// confidences outside [0, 1] and duplicate ids.
PredictionSet load_predictions(const std::filesystem::path& path);
PredictionSet predictions_from_json(const nlohmann::json& json);

nlohmann::json to_json(const PredictionSet& set);

/// `extra` keys (config, refinement statistics) are merged at top level.
void write_predictions(const PredictionSet& set, const std::filesystem::path& path,
                       const nlohmann::json& extra = nlohmann::json::object());

}  // namespace edgeveritas
