#include "edgeveritas/imgio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <system_error>

#include <opencv2/core.hpp>
#include <opencv2/core/utils/logger.hpp>
#include <opencv2/imgcodecs.hpp>

#include "json.hpp"

namespace edgeveritas {
namespace fs = std::filesystem;

RgbImage::RgbImage(std::size_t width, std::size_t height, Rgb fill)
    : pixels_(width, height, fill) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::ZeroDimension, "image dimensions must be at least 1x1");
  }
}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : pixels_(width, height, std::move(pixels)) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::ZeroDimension, "image dimensions must be at least 1x1");
  }
}

namespace {

void silence_codec_logging() {
  static const bool once = [] {
    cv::utils::logging::setLogLevel(cv::utils::logging::LOG_LEVEL_SILENT);
    return true;
  }();
  (void)once;
}

cv::Mat to_bgr_mat(const RgbImage& image) {
  cv::Mat mat(static_cast<int>(image.height()), static_cast<int>(image.width()), CV_8UC3);
  for (std::size_t y = 0; y < image.height(); ++y) {
    auto* row = mat.ptr<cv::Vec3b>(static_cast<int>(y));
    for (std::size_t x = 0; x < image.width(); ++x) {
      const Rgb& p = image(x, y);
      row[x] = cv::Vec3b(p.b, p.g, p.r);
    }
  }
  return mat;
}

double lanczos3(double x) {
  constexpr double a = 3.0;
  if (x == 0.0) return 1.0;
  if (std::abs(x) >= a) return 0.0;
  const double px = std::numbers::pi * x;
  return a * std::sin(px) * std::sin(px / a) / (px * px);
}

// Normalized taps for one output coordinate.
struct Taps {
  std::ptrdiff_t first = 0;
  std::vector<double> weights;
};

std::vector<Taps> lanczos_taps(std::size_t in, std::size_t out) {
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  const double stretch = std::max(scale, 1.0);
  const double support = 3.0 * stretch;
  std::vector<Taps> taps(out);
  for (std::size_t o = 0; o < out; ++o) {
    const double center = (static_cast<double>(o) + 0.5) * scale - 0.5;
    const auto lo = static_cast<std::ptrdiff_t>(std::floor(center - support));
    const auto hi = static_cast<std::ptrdiff_t>(std::ceil(center + support));
    Taps& t = taps[o];
    t.first = lo;
    double sum = 0.0;
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
      const double w = lanczos3((static_cast<double>(i) - center) / stretch);
      t.weights.push_back(w);
      sum += w;
    }
    for (double& w : t.weights) w /= sum;
  }
  return taps;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

}  // namespace

RgbImage load_image(const fs::path& path) {
  silence_codec_logging();
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::UnreadableImage, "not a readable file: " + path.string());
  }
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::UnreadableImage, "cannot decode " + path.string() + ": " + e.what());
  }
  if (mat.empty() || mat.type() != CV_8UC3) {
    throw Error(ErrorCode::UnreadableImage, "cannot decode " + path.string());
  }
  const auto w = static_cast<std::size_t>(mat.cols);
  const auto h = static_cast<std::size_t>(mat.rows);
  std::vector<Rgb> pixels;
  pixels.reserve(w * h);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < mat.cols; ++x) {
      pixels.push_back({row[x][2], row[x][1], row[x][0]});
    }
  }
  return RgbImage(w, h, std::move(pixels));
}

void save_image(const RgbImage& image, const fs::path& path) {
  silence_codec_logging();
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), to_bgr_mat(image));
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void save_edge_map_pgm(const EdgeMap& edges, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << edges.width() << ' ' << edges.height() << "\n255\n";
  for (const std::uint8_t v : edges.values()) {
    out.put(static_cast<char>(v ? 255 : 0));
  }
}

GrayImage to_grayscale(const RgbImage& image) {
  GrayImage gray(image.width(), image.height());
  auto dst = gray.values();
  const auto src = image.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = 0.299 * src[i].r + 0.587 * src[i].g + 0.114 * src[i].b;
    dst[i] = std::clamp(v, 0.0, 255.0);
  }
  return gray;
}

RgbImage expand_gray(const GrayImage& gray) {
  RgbImage image(gray.width(), gray.height());
  auto dst = image.pixels();
  const auto src = gray.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::uint8_t v = to_byte(src[i]);
    dst[i] = {v, v, v};
  }
  return image;
}

RgbImage resize_lanczos(const RgbImage& image, std::size_t target_width,
                        std::size_t target_height) {
  if (target_width == 0 || target_height == 0) {
    throw Error(ErrorCode::ZeroDimension, "resize target must be at least 1x1");
  }
  if (target_width == image.width() && target_height == image.height()) {
    return image;
  }
  const std::size_t in_w = image.width();
  const std::size_t in_h = image.height();
  const auto tx = lanczos_taps(in_w, target_width);
  const auto ty = lanczos_taps(in_h, target_height);

  using Px = std::array<double, 3>;
  Grid<Px> rows(target_width, in_h);
  for (std::size_t y = 0; y < in_h; ++y) {
    for (std::size_t x = 0; x < target_width; ++x) {
      Px acc{};
      const Taps& t = tx[x];
      for (std::size_t k = 0; k < t.weights.size(); ++k) {
        const auto sx = std::clamp<std::ptrdiff_t>(
            t.first + static_cast<std::ptrdiff_t>(k), 0,
            static_cast<std::ptrdiff_t>(in_w) - 1);
        const Rgb& p = image(static_cast<std::size_t>(sx), y);
        acc[0] += t.weights[k] * p.r;
        acc[1] += t.weights[k] * p.g;
        acc[2] += t.weights[k] * p.b;
      }
      rows(x, y) = acc;
    }
  }

  RgbImage out(target_width, target_height);
  for (std::size_t y = 0; y < target_height; ++y) {
    const Taps& t = ty[y];
    for (std::size_t x = 0; x < target_width; ++x) {
      Px acc{};
      for (std::size_t k = 0; k < t.weights.size(); ++k) {
        const auto sy = std::clamp<std::ptrdiff_t>(
            t.first + static_cast<std::ptrdiff_t>(k), 0,
            static_cast<std::ptrdiff_t>(in_h) - 1);
        const Px& p = rows(x, static_cast<std::size_t>(sy));
        for (int c = 0; c < 3; ++c) acc[c] += t.weights[k] * p[c];
      }
      out(x, y) = {to_byte(acc[0]), to_byte(acc[1]), to_byte(acc[2])};
    }
  }
  return out;
}

const ManifestEntry* Manifest::find(std::string_view id) const {
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const ManifestEntry& e) { return e.id == id; });
  return it == entries.end() ? nullptr : &*it;
}

namespace {

struct ScanResult {
  std::vector<ManifestEntry> entries;
  std::size_t skipped = 0;
};

void scan_tree(const fs::path& root, const fs::path& dir, ScanResult& result) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return;
  std::vector<fs::path> files;
  for (const auto& item : fs::recursive_directory_iterator(dir)) {
    if (item.is_regular_file()) files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    try {
      (void)load_image(file);
    } catch (const Error&) {
      ++result.skipped;
      continue;
    }
    const fs::path rel = file.lexically_relative(root);
    ManifestEntry entry;
    entry.id = rel.generic_string();
    entry.path = file.generic_string();
    if (auto first = rel.begin(); first != rel.end()) {
      entry.label = parse_label(first->string());
    }
    result.entries.push_back(std::move(entry));
  }
}

}  // namespace

Manifest ingest_dataset(const fs::path& root, bool require_labels) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::IoError, "dataset root is not a directory: " + root.string());
  }
  ScanResult scan;
  if (require_labels) {
    scan_tree(root, root / "real", scan);
    scan_tree(root, root / "fake", scan);
  } else {
    scan_tree(root, root, scan);
  }
  std::sort(scan.entries.begin(), scan.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  if (scan.entries.empty()) {
    throw Error(ErrorCode::EmptyDataset, "no decodable images under " + root.string());
  }
  if (require_labels) {
    for (const Label want : {Label::real, Label::fake}) {
      const bool present = std::any_of(scan.entries.begin(), scan.entries.end(),
                                       [&](const ManifestEntry& e) { return e.label == want; });
      if (!present) {
        throw Error(ErrorCode::MissingClass,
                    "class directory '" + std::string(to_string(want)) +
                        "' has no decodable images");
      }
    }
  }
  return Manifest{root.generic_string(), std::move(scan.entries), scan.skipped};
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
  nlohmann::json entries = nlohmann::json::array();
  for (const ManifestEntry& e : manifest.entries) {
    entries.push_back({{"id", e.id},
                       {"path", e.path},
                       {"label", e.label ? nlohmann::json(to_string(*e.label)) : nullptr}});
  }
  const nlohmann::json doc = {
      {"root", manifest.root}, {"entries", std::move(entries)}, {"skipped", manifest.skipped}};
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  Manifest manifest;
  try {
    const auto doc = nlohmann::json::parse(in);
    manifest.root = doc.at("root").get<std::string>();
    manifest.skipped = doc.value("skipped", std::size_t{0});
    std::set<std::string, std::less<>> seen;
    for (const auto& item : doc.at("entries")) {
      ManifestEntry e;
      e.id = item.at("id").get<std::string>();
      e.path = item.at("path").get<std::string>();
      if (const auto& label = item.at("label"); !label.is_null()) {
        e.label = parse_label(label.get<std::string>());
        if (!e.label) {
          throw Error(ErrorCode::SchemaError, "unknown label in manifest entry " + e.id);
        }
      }
      if (!seen.insert(e.id).second) {
        throw Error(ErrorCode::SchemaError, "duplicate manifest id " + e.id);
      }
      manifest.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, "malformed manifest " + path.string() + ": " + e.what());
  }
  return manifest;
}

}  // namespace edgeveritas
