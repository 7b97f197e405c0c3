#include "edgeveritas/classify.hpp"

#include <fstream>
#include <memory>
#include <set>
#include <unordered_map>

namespace edgeveritas {

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::external: return "external";
    case Stage::edge: return "edge";
    case Stage::refined: return "refined";
  }
  return "external";
}

std::optional<Stage> parse_stage(std::string_view text) noexcept {
  if (text == "external") return Stage::external;
  if (text == "edge") return Stage::edge;
  if (text == "refined") return Stage::refined;
  return std::nullopt;
}

std::string_view to_string(OrientationMode mode) noexcept {
  return mode == OrientationMode::paper_fixed ? "paper_fixed" : "recorded";
}

std::optional<OrientationMode> parse_orientation_mode(std::string_view text) noexcept {
  if (text == "recorded") return OrientationMode::recorded;
  if (text == "paper_fixed") return OrientationMode::paper_fixed;
  return std::nullopt;
}

const PredictionRecord* PredictionSet::find(std::string_view id) const {
  for (const PredictionRecord& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

TruthMap truth_from_manifest(const Manifest& manifest) {
  TruthMap truth;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.label) truth.emplace(e.id, *e.label);
  }
  return truth;
}

Label classify_score(double score, const CalibrationResult& calibration, OrientationMode mode) {
  const bool at_or_above = score >= calibration.threshold;
  if (mode == OrientationMode::paper_fixed || calibration.orientation == Orientation::fake_high) {
    return at_or_above ? Label::fake : Label::real;
  }
  return at_or_above ? Label::real : Label::fake;
}

PredictionSet classify_scores(const std::vector<ScoreRecord>& scores,
                              const CalibrationResult& calibration, OrientationMode mode) {
  PredictionSet set;
  set.provenance = "edge-variance threshold " + std::to_string(calibration.threshold) + " (" +
                   std::string(to_string(calibration.strategy)) + ", " +
                   std::string(mode == OrientationMode::paper_fixed
                                   ? "paper_fixed"
                                   : to_string(calibration.orientation)) +
                   ")";
  set.records.reserve(scores.size());
  for (const ScoreRecord& s : scores) {
    set.records.push_back(
        {s.id, classify_score(s.score, calibration, mode), std::nullopt, s.label, Stage::edge});
  }
  return set;
}

BatchResult classify_batch(const Manifest& manifest, const ScoringOptions& options,
                           const CalibrationResult& calibration, OrientationMode mode,
                           unsigned threads) {
  if (manifest.entries.empty()) throw Error(ErrorCode::EmptyDataset, "manifest has no entries");
  ScoredManifest scored = score_manifest(manifest, options, threads);
  BatchResult result;
  result.predictions = classify_scores(scored.scores, calibration, mode);
  result.scores = std::move(scored.scores);
  result.failures = std::move(scored.failures);
  return result;
}

EdgeLabeler manifest_labeler(const Manifest& manifest, const ScoringOptions& options,
                             const CalibrationResult& calibration, OrientationMode mode) {
  auto paths = std::make_shared<std::unordered_map<std::string, std::string>>();
  for (const ManifestEntry& e : manifest.entries) paths->emplace(e.id, e.path);
  return [paths, options, calibration, mode](const std::string& id) {
    const auto it = paths->find(id);
    if (it == paths->end()) {
      throw Error(ErrorCode::MissingImage, "no image for prediction id " + id);
    }
    return classify_score(score_image(load_image(it->second), options).score, calibration, mode);
  };
}

RefineResult refine_predictions(const PredictionSet& stage1, const TruthMap& truth,
                                const EdgeLabeler& edge_label) {
  for (const PredictionRecord& r : stage1.records) {
    if (!truth.contains(r.id)) {
      throw Error(ErrorCode::MissingTruth, "no ground truth for prediction id " + r.id);
    }
  }
  RefineResult result;
  result.predictions = stage1;
  for (PredictionRecord& r : result.predictions.records) {
    const Label actual = truth.find(r.id)->second;
    if (r.pred == actual) continue;
    ++result.misclassified;
    r.pred = edge_label(r.id);
    r.confidence.reset();
    r.stage = Stage::refined;
    if (r.pred == actual) ++result.corrected;
  }
  return result;
}

RefineResult gate_by_confidence(const PredictionSet& stage1, double min_confidence,
                                const EdgeLabeler& edge_label, const TruthMap* truth) {
  RefineResult result;
  result.predictions = stage1;
  for (PredictionRecord& r : result.predictions.records) {
    if (r.confidence && *r.confidence >= min_confidence) continue;
    ++result.misclassified;
    const Label before = r.pred;
    r.pred = edge_label(r.id);
    r.confidence.reset();
    r.stage = Stage::refined;
    if (truth && r.pred != before) {
      const auto it = truth->find(r.id);
      if (it != truth->end() && it->second == r.pred) ++result.corrected;
    }
  }
  return result;
}

PredictionSet predictions_from_json(const nlohmann::json& json) {
  auto schema_error = [](const std::string& what) { return Error(ErrorCode::SchemaError, what); };
  if (!json.is_object()) throw schema_error("predictions must be a JSON object");
  const auto items = json.find("items");
  if (items == json.end() || !items->is_array()) {
    throw schema_error("predictions need an 'items' array");
  }

  PredictionSet set;
  if (const auto p = json.find("provenance"); p != json.end()) {
    if (!p->is_string()) throw schema_error("'provenance' must be a string");
    set.provenance = p->get<std::string>();
  }

  std::set<std::string, std::less<>> seen;
  for (const auto& item : *items) {
    if (!item.is_object()) throw schema_error("prediction items must be objects");
    const auto id = item.find("id");
    if (id == item.end() || !id->is_string()) throw schema_error("prediction item without string 'id'");
    PredictionRecord r;
    r.id = id->get<std::string>();
    if (!seen.insert(r.id).second) throw schema_error("duplicate prediction id " + r.id);

    const auto pred = item.find("pred");
    if (pred == item.end() || !pred->is_string()) {
      throw schema_error("prediction " + r.id + " has no string 'pred'");
    }
    const auto label = parse_label(pred->get<std::string>());
    if (!label) throw schema_error("prediction " + r.id + " has label outside real|fake");
    r.pred = *label;

    if (const auto c = item.find("confidence"); c != item.end() && !c->is_null()) {
      if (!c->is_number()) throw schema_error("confidence of " + r.id + " is not a number");
      const double v = c->get<double>();
      if (!(v >= 0.0 && v <= 1.0)) throw schema_error("confidence of " + r.id + " outside [0, 1]");
      r.confidence = v;
    }
    if (const auto s = item.find("stage"); s != item.end() && !s->is_null()) {
      const auto stage = s->is_string() ? parse_stage(s->get<std::string>()) : std::nullopt;
      if (!stage) throw schema_error("prediction " + r.id + " has unknown stage");
      r.stage = *stage;
    }
    if (const auto t = item.find("truth"); t != item.end() && !t->is_null()) {
      const auto truth = t->is_string() ? parse_label(t->get<std::string>()) : std::nullopt;
      if (!truth) throw schema_error("prediction " + r.id + " has truth outside real|fake");
      r.truth = truth;
    }
    set.records.push_back(std::move(r));
  }
  return set;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open predictions " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, "predictions are not valid JSON: " + std::string(e.what()));
  }
  return predictions_from_json(doc);
}

nlohmann::json to_json(const PredictionSet& set) {
  nlohmann::json items = nlohmann::json::array();
  for (const PredictionRecord& r : set.records) {
    nlohmann::json item = {{"id", r.id}, {"pred", to_string(r.pred)}};
    if (r.confidence) item["confidence"] = *r.confidence;
    if (r.truth) item["truth"] = to_string(*r.truth);
    item["stage"] = to_string(r.stage);
    items.push_back(std::move(item));
  }
  return {{"provenance", set.provenance}, {"items", std::move(items)}};
}

void write_predictions(const PredictionSet& set, const std::filesystem::path& path,
                       const nlohmann::json& extra) {
  nlohmann::json doc = to_json(set);
  if (extra.is_object()) {
    for (const auto& [key, value] : extra.items()) doc[key] = value;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace edgeveritas
