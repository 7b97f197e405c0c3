#pragma once

#include <cstddef>
#include <optional>

#include "edgeveritas/classify.hpp"
#include "json.hpp"

namespace edgeveritas {

/// Binary confusion counts with fake as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  /// Same data with real as the positive class.
  ConfusionMatrix swapped() const noexcept { return {tn, tp, fn, fp}; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct BasicMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct IouMetrics {
  double fake = 0.0;
  double real = 0.0;
  double miou = 0.0;
};

/// Throws Error{MissingTruth} when a prediction id has no truth label.
ConfusionMatrix confusion(const PredictionSet& predictions, const TruthMap& truth);

/// Zero denominators yield 0. Throws Error{EmptyEvaluation}.
BasicMetrics basic_metrics(const ConfusionMatrix& cm);

/// Per-class precision/recall/F1 averaged over both classes.
BasicMetrics macro_metrics(const ConfusionMatrix& cm);

/// IoU per class and their mean; the real class uses tn as its true
/// positives. Throws Error{EmptyEvaluation}.
IouMetrics iou_metrics(const ConfusionMatrix& cm);

/// Relative accuracy gain in percent. Throws Error{ZeroBaseline}.
double accuracy_improvement(double accuracy_post, double accuracy_baseline);

struct EvaluationReport {
  ConfusionMatrix confusion;
  BasicMetrics basic;
  BasicMetrics macro;
  IouMetrics iou;
  std::optional<double> accuracy_improvement_pct;
  std::optional<std::size_t> corrected;
  std::optional<std::size_t> misclassified_set_size;
};

EvaluationReport evaluate(const ConfusionMatrix& cm);

nlohmann::json to_json(const EvaluationReport& report);

}  // namespace edgeveritas
