#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgeveritas/grid.hpp"
#include "edgeveritas/labels.hpp"

namespace edgeveritas {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, at least 1x1.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t width, std::size_t height, Rgb fill = {});
  RgbImage(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

  std::size_t width() const noexcept { return pixels_.width(); }
  std::size_t height() const noexcept { return pixels_.height(); }
  bool empty() const noexcept { return pixels_.empty(); }

  Rgb& operator()(std::size_t x, std::size_t y) { return pixels_(x, y); }
  const Rgb& operator()(std::size_t x, std::size_t y) const {
    return pixels_(x, y);
  }
  std::span<Rgb> pixels() noexcept { return pixels_.values(); }
  std::span<const Rgb> pixels() const noexcept { return pixels_.values(); }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  Grid<Rgb> pixels_;
};

/// Decodes PNG, JPEG or BMP. Grayscale sources come back with R = G = B.
/// Throws Error{UnreadableImage} on missing, corrupt or unsupported files.
RgbImage load_image(const std::filesystem::path& path);

/// Encodes by file extension (png, bmp, jpg). Test fixtures and debug dumps.
void save_image(const RgbImage& image, const std::filesystem::path& path);

/// Writes the mask as an 8-bit PGM with edge pixels at 255.
void save_edge_map_pgm(const EdgeMap& edges, const std::filesystem::path& path);

/// Luma 0.299 R + 0.587 G + 0.114 B, kept as a real value.
GrayImage to_grayscale(const RgbImage& image);

/// Replicates a gray field into R = G = B after rounding to 8 bits.
RgbImage expand_gray(const GrayImage& gray);

/// Separable Lanczos-3 resampling. Throws Error{ZeroDimension}.
RgbImage resize_lanczos(const RgbImage& image, std::size_t target_width,
                        std::size_t target_height);

struct ManifestEntry {
  std::string id;
  std::string path;
  std::optional<Label> label;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::string root;
  std::vector<ManifestEntry> entries;
  std::size_t skipped = 0;

  const ManifestEntry* find(std::string_view id) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Scans `root` recursively. Ids are paths relative to root; the first path
/// component `real` or `fake` supplies the label. Undecodable files are
/// dropped and counted in `skipped`.
///
/// With `require_labels`, both `real/` and `fake/` must yield at least one
/// decodable image (Error{MissingClass}). Error{EmptyDataset} when nothing
/// decodes at all.
Manifest ingest_dataset(const std::filesystem::path& root, bool require_labels);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace edgeveritas
