#include "edgeveritas/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgeveritas/parallel.hpp"

namespace edgeveritas {

DiffMap diff_map(const EdgeMap& original, const EdgeMap& blurred) {
  if (!original.same_shape(blurred)) {
    throw Error(ErrorCode::DimensionMismatch,
                "edge maps differ in size: " + std::to_string(original.width()) + "x" +
                    std::to_string(original.height()) + " vs " +
                    std::to_string(blurred.width()) + "x" + std::to_string(blurred.height()));
  }
  DiffMap diff(original.width(), original.height());
  const auto a = original.values();
  const auto b = blurred.values();
  auto d = diff.values();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<std::int8_t>(static_cast<int>(a[i]) - static_cast<int>(b[i]));
  }
  return diff;
}

MeanVariance mean_variance(const DiffMap& diff) {
  const auto values = diff.values();
  if (values.empty()) throw Error(ErrorCode::EmptyMap, "difference map is empty");
  const auto n = static_cast<double>(values.size());

  double sum = 0.0;
  for (const std::int8_t v : values) sum += v;
  const double mean = sum / n;

  double sq = 0.0;
  for (const std::int8_t v : values) {
    const double d = v - mean;
    sq += d * d;
  }
  return {mean, sq / n};
}

std::size_t count_edges(const EdgeMap& edges) {
  const auto values = edges.values();
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::uint8_t{1}));
}

double edge_variance(std::size_t n_edges, double variance, double epsilon) {
  return static_cast<double>(n_edges) / (variance + epsilon);
}

ScoreRecord edge_variance_score(const RgbImage& image, const CannyParams& params,
                                double epsilon) {
  params.validate();
  const GrayImage gray = to_grayscale(image);
  const GrayImage blurred = gaussian_blur(gray, params.blur_kernel, params.blur_sigma);
  const EdgeMap e1 = canny(gray, params);
  const EdgeMap e2 = canny(blurred, params);
  const auto stats = mean_variance(diff_map(e1, e2));

  ScoreRecord record;
  record.n_edges = count_edges(e1);
  record.mean = stats.mean;
  record.variance = stats.variance;
  record.score = edge_variance(record.n_edges, stats.variance, epsilon);
  return record;
}

ScoreRecord score_image(const RgbImage& image, const ScoringOptions& options) {
  if (options.input == EdgeInput::resized) {
    return edge_variance_score(resize_lanczos(image, kBridgeResolution, kBridgeResolution),
                               options.canny, options.epsilon);
  }
  return edge_variance_score(image, options.canny, options.epsilon);
}

ScoredManifest score_manifest(const Manifest& manifest, const ScoringOptions& options,
                              unsigned threads) {
  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<ScoreRecord>> slots(n);
  std::vector<std::optional<std::string>> errors(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      ScoreRecord record = score_image(load_image(entry.path), options);
      record.id = entry.id;
      record.label = entry.label;
      slots[i] = std::move(record);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  ScoredManifest result;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      result.scores.push_back(std::move(*slots[i]));
    } else {
      result.failures.push_back({manifest.entries[i].id, errors[i].value_or("unknown failure")});
    }
  }
  return result;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::SchemaError,
                "bad number '" + text + "' on scores line " + std::to_string(line));
  }
  return v;
}

constexpr const char* kScoresHeader = "id,label,n_edges,mean,variance,score";

}  // namespace

void write_scores_csv(const std::vector<ScoreRecord>& scores, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_scores_csv(scores, out);
}

void write_scores_csv(const std::vector<ScoreRecord>& scores, std::ostream& out) {
  out << kScoresHeader << '\n';
  for (const ScoreRecord& r : scores) {
    out << csv_field(r.id) << ',' << (r.label ? to_string(*r.label) : "") << ',' << r.n_edges
        << ',' << format_real(r.mean) << ',' << format_real(r.variance) << ','
        << format_real(r.score) << '\n';
  }
}

std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scores " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kScoresHeader) {
    throw Error(ErrorCode::SchemaError, "scores file must start with '" +
                                            std::string(kScoresHeader) + "'");
  }
  std::vector<ScoreRecord> scores;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) {
      throw Error(ErrorCode::SchemaError, "expected 6 fields on scores line " + std::to_string(line_no));
    }
    ScoreRecord r;
    r.id = f[0];
    if (!f[1].empty()) {
      r.label = parse_label(f[1]);
      if (!r.label) {
        throw Error(ErrorCode::SchemaError, "unknown label '" + f[1] + "' on scores line " +
                                                std::to_string(line_no));
      }
    }
    const auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.n_edges);
    if (ec != std::errc{} || ptr != f[2].data() + f[2].size()) {
      throw Error(ErrorCode::SchemaError, "bad n_edges on scores line " + std::to_string(line_no));
    }
    r.mean = parse_real(f[3], line_no);
    r.variance = parse_real(f[4], line_no);
    r.score = parse_real(f[5], line_no);
    scores.push_back(std::move(r));
  }
  return scores;
}

}  // namespace edgeveritas
