#include "edgeveritas/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "edgeveritas/error.hpp"

namespace edgeveritas {

std::string_view to_string(CenterStrategy strategy) noexcept {
  switch (strategy) {
    case CenterStrategy::median: return "median";
    case CenterStrategy::mean: return "mean";
    case CenterStrategy::mode: return "mode";
  }
  return "median";
}

std::string_view to_string(Orientation orientation) noexcept {
  return orientation == Orientation::fake_high ? "fake_high" : "fake_low";
}

std::optional<CenterStrategy> parse_strategy(std::string_view text) noexcept {
  if (text == "median") return CenterStrategy::median;
  if (text == "mean") return CenterStrategy::mean;
  if (text == "mode") return CenterStrategy::mode;
  return std::nullopt;
}

std::optional<Orientation> parse_orientation(std::string_view text) noexcept {
  if (text == "fake_high") return Orientation::fake_high;
  if (text == "fake_low") return Orientation::fake_low;
  return std::nullopt;
}

Histogram equal_width_histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::BadParams, "histogram needs at least one bin");
  if (values.empty()) throw Error(ErrorCode::EmptyClass, "histogram of an empty score list");

  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;

  Histogram h;
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);

  if (!(hi > lo)) {
    const double step = lo != 0.0 ? std::abs(lo) / static_cast<double>(bins) : 1.0;
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + step * static_cast<double>(i);
    h.counts[0] = values.size();
    return h;
  }

  const double range = hi - lo;
  const auto nbins = static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.edges[i] = lo + range * static_cast<double>(i) / nbins;
  }
  h.edges[bins] = hi;
  for (const double v : values) {
    auto idx = std::min(static_cast<std::size_t>((v - lo) / range * nbins), bins - 1);
    // Rounding in the index formula can disagree with the stored edges by one.
    if (idx > 0 && v < h.edges[idx]) --idx;
    if (idx + 1 < bins && v >= h.edges[idx + 1]) ++idx;
    h.counts[idx] += 1;
  }
  return h;
}

double class_center(std::span<const double> scores, CenterStrategy strategy, std::size_t bins) {
  if (scores.empty()) throw Error(ErrorCode::EmptyClass, "class has no calibration scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  switch (strategy) {
    case CenterStrategy::median:
      return n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    case CenterStrategy::mean:
      // Summed in sorted order so the result does not depend on input order.
      return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
    case CenterStrategy::mode: {
      if (sorted.front() == sorted.back()) return sorted.front();
      const Histogram h = equal_width_histogram(sorted, bins);
      const auto best = std::max_element(h.counts.begin(), h.counts.end());
      return h.center(static_cast<std::size_t>(best - h.counts.begin()));
    }
  }
  return sorted[n / 2];
}

CalibrationResult valley_threshold(std::span<const double> real_scores,
                                   std::span<const double> fake_scores,
                                   CenterStrategy strategy, std::size_t bins) {
  if (real_scores.empty() || fake_scores.empty()) {
    throw Error(ErrorCode::EmptyClass,
                std::string("calibration needs scores for both classes; ") +
                    (real_scores.empty() ? "real" : "fake") + " class is empty");
  }
  CalibrationResult result;
  result.strategy = strategy;
  result.center_real = class_center(real_scores, strategy, bins);
  result.center_fake = class_center(fake_scores, strategy, bins);
  result.orientation =
      result.center_fake >= result.center_real ? Orientation::fake_high : Orientation::fake_low;

  std::vector<double> all(real_scores.begin(), real_scores.end());
  all.insert(all.end(), fake_scores.begin(), fake_scores.end());
  result.histogram = equal_width_histogram(all, bins);

  const double lo = std::min(result.center_real, result.center_fake);
  const double hi = std::max(result.center_real, result.center_fake);
  std::optional<std::size_t> best;
  for (std::size_t b = 0; b < bins; ++b) {
    const double c = result.histogram.center(b);
    if (!(c > lo && c < hi)) continue;
    if (!best || result.histogram.counts[b] < result.histogram.counts[*best]) best = b;
  }

  if (best) {
    result.threshold = result.histogram.center(*best);
  } else {
    result.threshold = (result.center_real + result.center_fake) / 2.0;
    result.fallback_midpoint = true;
  }
  return result;
}

nlohmann::json to_json(const CalibrationResult& result) {
  return {
      {"strategy", to_string(result.strategy)},
      {"center_real", result.center_real},
      {"center_fake", result.center_fake},
      {"threshold", result.threshold},
      {"orientation", to_string(result.orientation)},
      {"fallback_midpoint", result.fallback_midpoint},
      {"histogram", {{"edges", result.histogram.edges}, {"counts", result.histogram.counts}}},
  };
}

CalibrationResult calibration_from_json(const nlohmann::json& json) {
  CalibrationResult result;
  try {
    const auto strategy = parse_strategy(json.at("strategy").get<std::string>());
    const auto orientation = parse_orientation(json.at("orientation").get<std::string>());
    if (!strategy || !orientation) {
      throw Error(ErrorCode::SchemaError, "calibration has unknown strategy or orientation");
    }
    result.strategy = *strategy;
    result.orientation = *orientation;
    result.center_real = json.at("center_real").get<double>();
    result.center_fake = json.at("center_fake").get<double>();
    result.threshold = json.at("threshold").get<double>();
    result.fallback_midpoint = json.at("fallback_midpoint").get<bool>();
    result.histogram.edges = json.at("histogram").at("edges").get<std::vector<double>>();
    result.histogram.counts = json.at("histogram").at("counts").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("malformed calibration: ") + e.what());
  }
  if (result.histogram.counts.empty() ||
      result.histogram.edges.size() != result.histogram.counts.size() + 1) {
    throw Error(ErrorCode::SchemaError, "calibration histogram needs bins + 1 edges");
  }
  return result;
}

void write_calibration(const CalibrationResult& result, const std::filesystem::path& path,
                       const nlohmann::json& config) {
  nlohmann::json doc = to_json(result);
  if (!config.is_null()) doc["config"] = config;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

CalibrationResult read_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open calibration " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, "calibration is not valid JSON: " + std::string(e.what()));
  }
  return calibration_from_json(doc);
}

}  // namespace edgeveritas
