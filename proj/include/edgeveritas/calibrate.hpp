#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace edgeveritas {

inline constexpr std::size_t kHistogramBins = 50;

enum class CenterStrategy { median, mean, mode };

/// Which side of the threshold is called fake.
enum class Orientation { fake_high, fake_low };

std::string_view to_string(CenterStrategy strategy) noexcept;
std::string_view to_string(Orientation orientation) noexcept;
std::optional<CenterStrategy> parse_strategy(std::string_view text) noexcept;
std::optional<Orientation> parse_orientation(std::string_view text) noexcept;

struct Histogram {
  std::vector<double> edges;         // bins + 1, strictly increasing
  std::vector<std::size_t> counts;   // bins

  double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// Equal-width histogram over [min, max] with the top edge inclusive. When all
/// values coincide, every count lands in bin 0 of a unit-step grid anchored
/// at the shared value.
Histogram equal_width_histogram(std::span<const double> values,
                                std::size_t bins = kHistogramBins);

struct CalibrationResult {
  double center_real = 0.0;
  double center_fake = 0.0;
  CenterStrategy strategy = CenterStrategy::median;
  Histogram histogram;
  double threshold = 0.0;
  Orientation orientation = Orientation::fake_high;
  bool fallback_midpoint = false;

  friend bool operator==(const CalibrationResult&,
                         const CalibrationResult&) = default;
};

/// Median (even n averages the two central order statistics), arithmetic
/// mean, or the center of the most populated bin over the class's own range
/// (lowest bin wins ties). Order-insensitive. Throws Error{EmptyClass}.
double class_center(std::span<const double> scores, CenterStrategy strategy,
                    std::size_t bins = kHistogramBins);

/// Valley threshold between the class centers:
///  - histogram all scores together;
///  - the valley is every bin whose center lies strictly between the two
///    class centers;
///  - T is the center of the valley's least populated bin (lowest on ties);
///  - an empty valley falls back to the midpoint of the centers.
/// Throws Error{EmptyClass} when either list is empty.
CalibrationResult valley_threshold(std::span<const double> real_scores,
                                   std::span<const double> fake_scores,
                                   CenterStrategy strategy = CenterStrategy::median,
                                   std::size_t bins = kHistogramBins);

nlohmann::json to_json(const CalibrationResult& result);
CalibrationResult calibration_from_json(const nlohmann::json& json);

void write_calibration(const CalibrationResult& result,
                       const std::filesystem::path& path,
                       const nlohmann::json& config = nullptr);
CalibrationResult read_calibration(const std::filesystem::path& path);

}  // namespace edgeveritas
