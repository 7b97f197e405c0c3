#pragma once

#include <cstddef>
#include <vector>

#include "edgeveritas/grid.hpp"

namespace edgeveritas {

/// Canny thresholds live on the L2 Sobel-magnitude scale of 8-bit-range input.
/// The blur fields drive both the smoothing that produces the blurred
/// comparison image and, when `internal_blur` is set, Canny's own pre-smooth.
struct CannyParams {
  double t_low = 100.0;
  double t_high = 200.0;
  int blur_kernel = 3;
  double blur_sigma = 0.8;
  bool internal_blur = false;

  /// Throws Error{EvenKernel} or Error{BadParams}.
  void validate() const;

  /// Sigma conventionally paired with a k-tap kernel: 0.3((k-1)/2 - 1) + 0.8.
  static double sigma_for_kernel(int kernel);

  friend bool operator==(const CannyParams&, const CannyParams&) = default;
};

/// Normalized sampled 1-D Gaussian of odd length `kernel`; the 2-D kernel is
/// its outer product.
std::vector<double> gaussian_weights(int kernel, double sigma);

/// Separable Gaussian convolution (rows first, then columns) with replicated
/// borders. Throws Error{EvenKernel} for even sizes, Error{BadParams} for
/// sigma <= 0.
GrayImage gaussian_blur(const GrayImage& image, int kernel, double sigma);

struct Gradients {
  RealField gx;
  RealField gy;
  RealField magnitude;
  RealField direction;  // radians, atan2(gy, gx)
};

/// 3x3 Sobel with replicated borders; y grows downward.
/// Throws Error{TooSmall} below 3x3.
Gradients sobel_gradients(const GrayImage& image);

/// Gradient direction quantized to 0, 45, 90 or 135 degrees (returned as
/// 0..3).
int quantize_direction(double radians) noexcept;

/// Non-maximum suppression over the quantized direction. A pixel survives
/// when it is strictly above its neighbor on the negative side of the
/// gradient and not below the one on the positive side, so a two-pixel
/// plateau thins to one pixel. Neighbors outside the image count as zero.
RealField non_maximum_suppression(const Gradients& gradients);

/// Double-threshold linking: candidates >= t_high seed edges, candidates in
/// [t_low, t_high) survive only when 8-connected to a seed.
EdgeMap hysteresis(const RealField& suppressed, double t_low, double t_high);

EdgeMap canny(const GrayImage& image, const CannyParams& params);

}  // namespace edgeveritas
