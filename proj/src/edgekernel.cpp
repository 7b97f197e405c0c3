#include "edgeveritas/edgekernel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace edgeveritas {

void CannyParams::validate() const {
  if (!(t_low >= 0.0) || !(t_high > t_low)) {
    throw Error(ErrorCode::BadParams, "canny thresholds must satisfy 0 <= t_low < t_high");
  }
  if (blur_kernel % 2 == 0) {
    throw Error(ErrorCode::EvenKernel,
                "blur kernel must be odd, got " + std::to_string(blur_kernel));
  }
  if (blur_kernel < 3) {
    throw Error(ErrorCode::BadParams, "blur kernel must be at least 3");
  }
  if (!(blur_sigma > 0.0)) {
    throw Error(ErrorCode::BadParams, "blur sigma must be positive");
  }
}

double CannyParams::sigma_for_kernel(int kernel) {
  return 0.3 * ((kernel - 1) * 0.5 - 1.0) + 0.8;
}

std::vector<double> gaussian_weights(int kernel, double sigma) {
  if (kernel % 2 == 0) {
    throw Error(ErrorCode::EvenKernel, "kernel size must be odd, got " + std::to_string(kernel));
  }
  if (kernel < 1) throw Error(ErrorCode::BadParams, "kernel size must be positive");
  if (!(sigma > 0.0)) throw Error(ErrorCode::BadParams, "sigma must be positive");

  const int radius = kernel / 2;
  const double denom = 2.0 * sigma * sigma;
  std::vector<double> w(static_cast<std::size_t>(kernel));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / denom);
    w[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

GrayImage gaussian_blur(const GrayImage& image, int kernel, double sigma) {
  const auto w = gaussian_weights(kernel, sigma);
  const auto radius = static_cast<std::ptrdiff_t>(kernel / 2);
  const std::size_t width = image.width();
  const std::size_t height = image.height();

  GrayImage rows(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += w[static_cast<std::size_t>(k + radius)] *
               image.clamped(static_cast<std::ptrdiff_t>(x) + k, static_cast<std::ptrdiff_t>(y));
      }
      rows(x, y) = acc;
    }
  }

  GrayImage out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += w[static_cast<std::size_t>(k + radius)] *
               rows.clamped(static_cast<std::ptrdiff_t>(x), static_cast<std::ptrdiff_t>(y) + k);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

Gradients sobel_gradients(const GrayImage& image) {
  const std::size_t width = image.width();
  const std::size_t height = image.height();
  if (width < 3 || height < 3) {
    throw Error(ErrorCode::TooSmall, "gradients need at least 3x3 pixels, got " +
                                         std::to_string(width) + "x" + std::to_string(height));
  }
  Gradients g{RealField(width, height), RealField(width, height), RealField(width, height),
              RealField(width, height)};
  for (std::size_t yy = 0; yy < height; ++yy) {
    for (std::size_t xx = 0; xx < width; ++xx) {
      const auto x = static_cast<std::ptrdiff_t>(xx);
      const auto y = static_cast<std::ptrdiff_t>(yy);
      auto p = [&](std::ptrdiff_t dx, std::ptrdiff_t dy) { return image.clamped(x + dx, y + dy); };
      const double gx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
      g.gx(xx, yy) = gx;
      g.gy(xx, yy) = gy;
      g.magnitude(xx, yy) = std::sqrt(gx * gx + gy * gy);
      g.direction(xx, yy) = std::atan2(gy, gx);
    }
  }
  return g;
}

int quantize_direction(double radians) noexcept {
  double deg = radians * (180.0 / std::numbers::pi);
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  if (deg < 22.5 || deg >= 157.5) return 0;
  if (deg < 67.5) return 1;
  if (deg < 112.5) return 2;
  return 3;
}

namespace {

// Step toward increasing gradient for each quantized direction (y down).
constexpr std::array<std::pair<int, int>, 4> kForward = {{{1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

}  // namespace

RealField non_maximum_suppression(const Gradients& gradients) {
  const RealField& mag = gradients.magnitude;
  const auto w = static_cast<std::ptrdiff_t>(mag.width());
  const auto h = static_cast<std::ptrdiff_t>(mag.height());
  auto at = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return mag(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  };

  RealField out(mag.width(), mag.height());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      const auto ux = static_cast<std::size_t>(x);
      const auto uy = static_cast<std::size_t>(y);
      const double m = mag(ux, uy);
      const auto [dx, dy] = kForward[static_cast<std::size_t>(
          quantize_direction(gradients.direction(ux, uy)))];
      if (m > at(x - dx, y - dy) && m >= at(x + dx, y + dy)) out(ux, uy) = m;
    }
  }
  return out;
}

EdgeMap hysteresis(const RealField& suppressed, double t_low, double t_high) {
  const std::size_t width = suppressed.width();
  const std::size_t height = suppressed.height();
  EdgeMap edges(width, height, 0);
  std::vector<std::size_t> stack;

  auto candidate = [&](std::size_t i) {
    const double m = suppressed.values()[i];
    return m > 0.0 && m >= t_low;
  };

  const auto values = suppressed.values();
  auto marks = edges.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && values[i] >= t_high && !marks[i]) {
      marks[i] = 1;
      stack.push_back(i);
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        const auto cx = static_cast<std::ptrdiff_t>(cur % width);
        const auto cy = static_cast<std::ptrdiff_t>(cur / width);
        for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
          for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
            const std::ptrdiff_t nx = cx + dx;
            const std::ptrdiff_t ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(width) ||
                ny >= static_cast<std::ptrdiff_t>(height)) {
              continue;
            }
            const auto n = static_cast<std::size_t>(ny) * width + static_cast<std::size_t>(nx);
            if (!marks[n] && candidate(n)) {
              marks[n] = 1;
              stack.push_back(n);
            }
          }
        }
      }
    }
  }
  return edges;
}

EdgeMap canny(const GrayImage& image, const CannyParams& params) {
  params.validate();
  if (image.width() < 3 || image.height() < 3) {
    throw Error(ErrorCode::TooSmall, "canny needs at least 3x3 pixels");
  }
  const Gradients g = params.internal_blur
                          ? sobel_gradients(gaussian_blur(image, params.blur_kernel, params.blur_sigma))
                          : sobel_gradients(image);
  return hysteresis(non_maximum_suppression(g), params.t_low, params.t_high);
}

}  // namespace edgeveritas
