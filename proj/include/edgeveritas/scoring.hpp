#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgeveritas/edgekernel.hpp"
#include "edgeveritas/grid.hpp"
#include "edgeveritas/imgio.hpp"
#include "edgeveritas/labels.hpp"

namespace edgeveritas {

inline constexpr double kDefaultEpsilon = 1e-8;
inline constexpr std::size_t kBridgeResolution = 224;

/// Which image the edge module sees: the decoded original, or the same
/// 224x224 Lanczos resize the external classifier consumes.
enum class EdgeInput { native, resized };

struct ScoringOptions {
  CannyParams canny;
  double epsilon = kDefaultEpsilon;
  EdgeInput input = EdgeInput::native;
};

struct ScoreRecord {
  std::string id;
  std::size_t n_edges = 0;
  double mean = 0.0;
  double variance = 0.0;
  double score = 0.0;
  std::optional<Label> label;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

/// D = E1 - E2. Throws Error{DimensionMismatch}.
DiffMap diff_map(const EdgeMap& original, const EdgeMap& blurred);

/// Population mean and variance over every pixel, two-pass.
/// Throws Error{EmptyMap}.
MeanVariance mean_variance(const DiffMap& diff);

std::size_t count_edges(const EdgeMap& edges);

/// S = N_edges / (variance + epsilon).
double edge_variance(std::size_t n_edges, double variance, double epsilon);

/// Full edge pipeline on one image: grayscale, blur, Canny on both, difference
/// map statistics, score. Only `n_edges`, `mean`, `variance` and `score` are
/// filled; identity and label are the caller's.
ScoreRecord edge_variance_score(const RgbImage& image, const CannyParams& params,
                                double epsilon = kDefaultEpsilon);

/// Applies the EdgeInput policy before scoring.
ScoreRecord score_image(const RgbImage& image, const ScoringOptions& options);

struct ScoreFailure {
  std::string id;
  std::string message;
};

struct ScoredManifest {
  std::vector<ScoreRecord> scores;  // manifest order, failures omitted
  std::vector<ScoreFailure> failures;
};

/// Scores every entry, fanning out over `threads` workers. Entries that fail
/// to decode or score are reported in `failures` instead of aborting.
ScoredManifest score_manifest(const Manifest& manifest,
                              const ScoringOptions& options,
                              unsigned threads = 1);

/// `id,label,n_edges,mean,variance,score`; reals at 17 significant digits.
void write_scores_csv(const std::vector<ScoreRecord>& scores, std::ostream& out);
void write_scores_csv(const std::vector<ScoreRecord>& scores,
                      const std::filesystem::path& path);
std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path);

}  // namespace edgeveritas
