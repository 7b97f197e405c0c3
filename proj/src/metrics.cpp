#include "edgeveritas/metrics.hpp"

namespace edgeveritas {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void require_samples(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyEvaluation, "no evaluated samples");
}

}  // namespace

ConfusionMatrix confusion(const PredictionSet& predictions, const TruthMap& truth) {
  ConfusionMatrix cm;
  for (const PredictionRecord& r : predictions.records) {
    const auto it = truth.find(r.id);
    if (it == truth.end()) {
      throw Error(ErrorCode::MissingTruth, "no ground truth for prediction id " + r.id);
    }
    const bool predicted_fake = r.pred == Label::fake;
    const bool actually_fake = it->second == Label::fake;
    if (predicted_fake && actually_fake) ++cm.tp;
    else if (!predicted_fake && !actually_fake) ++cm.tn;
    else if (predicted_fake) ++cm.fp;
    else ++cm.fn;
  }
  return cm;
}

BasicMetrics basic_metrics(const ConfusionMatrix& cm) {
  require_samples(cm);
  BasicMetrics m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

BasicMetrics macro_metrics(const ConfusionMatrix& cm) {
  const BasicMetrics fake = basic_metrics(cm);
  const BasicMetrics real = basic_metrics(cm.swapped());
  return {fake.accuracy, (fake.precision + real.precision) / 2.0,
          (fake.recall + real.recall) / 2.0, (fake.f1 + real.f1) / 2.0};
}

IouMetrics iou_metrics(const ConfusionMatrix& cm) {
  require_samples(cm);
  IouMetrics m;
  m.fake = ratio(cm.tp, cm.tp + cm.fp + cm.fn);
  m.real = ratio(cm.tn, cm.tn + cm.fn + cm.fp);
  m.miou = (m.fake + m.real) / 2.0;
  return m;
}

double accuracy_improvement(double accuracy_post, double accuracy_baseline) {
  if (!(accuracy_baseline > 0.0)) {
    throw Error(ErrorCode::ZeroBaseline, "baseline accuracy must be positive");
  }
  return (accuracy_post - accuracy_baseline) / accuracy_baseline * 100.0;
}

EvaluationReport evaluate(const ConfusionMatrix& cm) {
  EvaluationReport report;
  report.confusion = cm;
  report.basic = basic_metrics(cm);
  report.macro = macro_metrics(cm);
  report.iou = iou_metrics(cm);
  return report;
}

nlohmann::json to_json(const EvaluationReport& report) {
  auto optional = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  const ConfusionMatrix& cm = report.confusion;
  return {
      {"positive_class", "fake"},
      {"confusion", {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}}},
      {"accuracy", report.basic.accuracy},
      {"precision", report.basic.precision},
      {"recall", report.basic.recall},
      {"f1", report.basic.f1},
      {"iou", {{"fake", report.iou.fake}, {"real", report.iou.real}, {"miou", report.iou.miou}}},
      {"macro",
       {{"precision", report.macro.precision},
        {"recall", report.macro.recall},
        {"f1", report.macro.f1}}},
      {"accuracy_improvement_pct", optional(report.accuracy_improvement_pct)},
      {"corrected", optional(report.corrected)},
      {"misclassified_set_size", optional(report.misclassified_set_size)},
  };
}

}  // namespace edgeveritas
