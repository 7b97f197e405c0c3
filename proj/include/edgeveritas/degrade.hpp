#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeveritas/calibrate.hpp"
#include "edgeveritas/classify.hpp"
#include "edgeveritas/imgio.hpp"
#include "edgeveritas/scoring.hpp"
#include "json.hpp"

namespace edgeveritas {

enum class DegradationKind {
  gaussian_noise,
  salt_pepper,
  speckle,
  gaussian_blur,
  motion_blur,
  median_blur,
  random_patch,
  fixed_pattern,
};

inline constexpr std::array<DegradationKind, 8> kAllDegradations = {
    DegradationKind::gaussian_noise, DegradationKind::salt_pepper,
    DegradationKind::speckle,        DegradationKind::gaussian_blur,
    DegradationKind::motion_blur,    DegradationKind::median_blur,
    DegradationKind::random_patch,   DegradationKind::fixed_pattern,
};

std::string_view to_string(DegradationKind kind) noexcept;
std::optional<DegradationKind> parse_degradation(std::string_view text) noexcept;

/// One corruption and its parameters. Only the fields relevant to `kind` are
/// read:
///   gaussian_noise  sigma >= 0 (8-bit units)
///   salt_pepper     density in [0, 1]
///   speckle         sigma >= 0 (multiplicative)
///   gaussian_blur   kernel odd >= 1, sigma > 0
///   motion_blur     length >= 1 (horizontal box)
///   median_blur     kernel odd >= 1
///   random_patch    area_fraction in (0, 1]
///   fixed_pattern   spacing >= 2
struct DegradationSpec {
  DegradationKind kind = DegradationKind::gaussian_noise;
  double sigma = 15.0;
  double density = 0.02;
  int kernel = 5;
  int length = 9;
  double area_fraction = 0.10;
  int spacing = 16;
  std::uint64_t seed = 0;

  /// Defaults for `kind`.
  static DegradationSpec defaults(DegradationKind kind, std::uint64_t seed = 0);

  /// Throws Error{BadParams}.
  void validate() const;

  friend bool operator==(const DegradationSpec&, const DegradationSpec&) = default;
};

nlohmann::json to_json(const DegradationSpec& spec);

/// Deterministic in (image, spec, image_key). Random draws are keyed by
/// (seed, image_key, pixel index), so results never depend on call order or
/// thread count.
RgbImage apply_degradation(const RgbImage& image, const DegradationSpec& spec,
                           std::string_view image_key = {});

struct LabeledImage {
  std::string id;
  RgbImage image;
  Label label;
};

struct DegradationRow {
  DegradationKind kind;
  std::size_t n_real = 0;
  std::size_t n_fake = 0;
  double threshold = 0.0;
  double accuracy = 0.0;  // fraction in [0, 1]

  friend bool operator==(const DegradationRow&, const DegradationRow&) = default;
};

/// Degrade every image, score, recalibrate on the degraded scores, classify
/// and measure accuracy. Throws Error{EmptyDataset} or Error{MissingClass}.
DegradationRow degradation_experiment(const std::vector<LabeledImage>& corpus,
                                      const DegradationSpec& spec,
                                      const ScoringOptions& options,
                                      CenterStrategy strategy,
                                      OrientationMode mode = OrientationMode::recorded,
                                      unsigned threads = 1);

/// Loads the labeled manifest first; unlabeled or undecodable entries are
/// skipped.
DegradationRow degradation_experiment(const Manifest& manifest,
                                      const DegradationSpec& spec,
                                      const ScoringOptions& options,
                                      CenterStrategy strategy,
                                      OrientationMode mode = OrientationMode::recorded,
                                      unsigned threads = 1);

std::vector<LabeledImage> load_labeled_corpus(const Manifest& manifest);

/// `kind,n_real,n_fake,threshold,accuracy`
void write_degradation_csv(const std::vector<DegradationRow>& rows, std::ostream& out);
void write_degradation_csv(const std::vector<DegradationRow>& rows,
                           const std::filesystem::path& path);

}  // namespace edgeveritas
