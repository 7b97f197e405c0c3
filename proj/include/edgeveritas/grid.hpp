#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edgeveritas/error.hpp"

namespace edgeveritas {

/// Row-major 2-D field. All pixel stages (grayscale, gradients, edge and
/// difference maps) are grids over a different element type.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  Grid(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "grid data size " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(width_) + "x" +
                      std::to_string(height_));
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  const T& operator()(std::size_t x, std::size_t y) const {
    return data_[y * width_ + x];
  }

  /// Replicated-border access: coordinates outside the grid clamp to the
  /// nearest valid pixel.
  const T& clamped(std::ptrdiff_t x, std::ptrdiff_t y) const {
    const auto w = static_cast<std::ptrdiff_t>(width_);
    const auto h = static_cast<std::ptrdiff_t>(height_);
    x = x < 0 ? 0 : (x >= w ? w - 1 : x);
    y = y < 0 ? 0 : (y >= h ? h - 1 : y);
    return data_[static_cast<std::size_t>(y) * width_ +
                 static_cast<std::size_t>(x)];
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Intensities kept as reals in [0, 255]; never re-quantized.
using GrayImage = Grid<double>;
using RealField = Grid<double>;
/// Binary edge mask, values in {0, 1}.
using EdgeMap = Grid<std::uint8_t>;
/// Signed edge difference, values in {-1, 0, +1}.
using DiffMap = Grid<std::int8_t>;

}  // namespace edgeveritas
