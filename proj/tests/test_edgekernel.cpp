#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "edgeveritas/edgekernel.hpp"
#include "oracles.hpp"

using namespace edgeveritas;
namespace oracle = evtest::oracle;

namespace {

GrayImage random_gray(std::uint64_t seed, std::size_t w, std::size_t h, double lo = 0.0,
                      double hi = 255.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  GrayImage g(w, h);
  for (double& v : g.values()) v = u(rng);
  return g;
}

GrayImage step_image(std::size_t w, std::size_t h, std::size_t split) {
  GrayImage g(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = split; x < w; ++x) g(x, y) = 255.0;
  return g;
}

oracle::Plane as_plane(const GrayImage& g) {
  return {g.width(), g.height(), std::vector<double>(g.values().begin(), g.values().end())};
}

std::size_t count_ones(const EdgeMap& e) {
  std::size_t n = 0;
  for (const auto v : e.values()) n += v;
  return n;
}

}  // namespace

TEST(GaussianBlur, ConstantPreservedForEveryKernel) {
  const GrayImage g(9, 6, 77.0);
  for (const int k : {1, 3, 5, 7, 9}) {
    const GrayImage out = gaussian_blur(g, k, 1.3);
    for (const double v : out.values()) EXPECT_NEAR(v, 77.0, 1e-12) << k;
  }
}

TEST(GaussianBlur, CenterImpulseHandEvaluated) {
  GrayImage g(3, 3);
  g(1, 1) = 9.0;
  // 1-D weights at offsets 0 and 1 for sigma 0.8, normalized.
  const double e1 = std::exp(-1.0 / (2.0 * 0.8 * 0.8));
  const double center = 1.0 / (1.0 + 2.0 * e1);
  EXPECT_NEAR(gaussian_blur(g, 3, 0.8)(1, 1), 9.0 * center * center, 1e-12);
}

TEST(GaussianBlur, ImpulseMassAndBruteForceOracle) {
  GrayImage g(5, 5);
  g(2, 2) = 9.0;
  const GrayImage out = gaussian_blur(g, 3, 0.8);
  double sum = 0.0;
  for (const double v : out.values()) sum += v;
  EXPECT_NEAR(sum, 9.0, 1e-9);

  for (const int k : {3, 5, 7}) {
    const GrayImage r = random_gray(k, 11, 8);
    const auto ref = oracle::blur_2d(as_plane(r), k, 1.1);
    const GrayImage got = gaussian_blur(r, k, 1.1);
    for (std::size_t i = 0; i < ref.v.size(); ++i) EXPECT_NEAR(got.values()[i], ref.v[i], 1e-10);
  }
}

TEST(GaussianBlur, WeightsNormalizedAndSymmetric) {
  const auto w = gaussian_weights(7, 1.4);
  double sum = 0.0;
  for (const double v : w) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(w[i], w[6 - i]);
}

TEST(GaussianBlur, MeanPreservedOnConstantExtendedField) {
  GrayImage g(20, 20, 100.0);
  const GrayImage inner = random_gray(4, 14, 14);
  for (std::size_t y = 0; y < 14; ++y)
    for (std::size_t x = 0; x < 14; ++x) g(x + 3, y + 3) = inner(x, y);
  auto mean = [](const GrayImage& f) {
    double s = 0.0;
    for (const double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
  };
  EXPECT_NEAR(mean(gaussian_blur(g, 5, 1.1)), mean(g), 1e-6);
  EXPECT_NEAR(mean(gaussian_blur(g, 7, 1.4)), mean(g), 1e-6);
}

TEST(GaussianBlur, RejectsBadParameters) {
  const GrayImage g(5, 5);
  for (const int k : {2, 4, 0}) {
    try {
      gaussian_blur(g, k, 1.0);
      FAIL() << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EvenKernel);
    }
  }
  EXPECT_THROW(gaussian_blur(g, 3, 0.0), Error);
  EXPECT_THROW(gaussian_blur(g, 3, -1.0), Error);
}

TEST(CannyParams, SigmaForKernel) {
  EXPECT_NEAR(CannyParams::sigma_for_kernel(3), 0.8, 1e-15);
  EXPECT_NEAR(CannyParams::sigma_for_kernel(5), 1.1, 1e-15);
  EXPECT_NEAR(CannyParams::sigma_for_kernel(7), 1.4, 1e-15);
}

TEST(CannyParams, Validation) {
  CannyParams p;
  p.validate();
  p.t_high = p.t_low;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.blur_kernel = 4;
  try {
    p.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EvenKernel);
  }
  p = {};
  p.t_low = -1.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Sobel, ConstantImageHasNoGradient) {
  const Gradients g = sobel_gradients(GrayImage(6, 5, 42.0));
  for (const double v : g.magnitude.values()) EXPECT_EQ(v, 0.0);
}

TEST(Sobel, VerticalStepPointsRight) {
  const Gradients g = sobel_gradients(step_image(8, 6, 4));
  for (std::size_t y = 1; y + 1 < 6; ++y) {
    EXPECT_GT(g.gx(3, y), 0.0);
    EXPECT_GT(g.gx(4, y), 0.0);
    EXPECT_EQ(g.gy(3, y), 0.0);
    EXPECT_DOUBLE_EQ(g.gx(3, y), 4.0 * 255.0);
  }
}

TEST(Sobel, HandComputedThreeByThree) {
  GrayImage g(3, 3, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 10});
  const Gradients s = sobel_gradients(g);
  // Center: gx = (3 + 2*6 + 10) - (1 + 2*4 + 7) = 9; gy = (7 + 16 + 10) - (1 + 4 + 3) = 25.
  EXPECT_DOUBLE_EQ(s.gx(1, 1), 9.0);
  EXPECT_DOUBLE_EQ(s.gy(1, 1), 25.0);
  EXPECT_DOUBLE_EQ(s.magnitude(1, 1), std::sqrt(81.0 + 625.0));
  EXPECT_DOUBLE_EQ(s.direction(1, 1), std::atan2(25.0, 9.0));
  const auto ref = oracle::sobel_matrix(as_plane(g));
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_DOUBLE_EQ(s.gx.values()[i], ref.gx.v[i]);
    EXPECT_DOUBLE_EQ(s.gy.values()[i], ref.gy.v[i]);
  }
}

TEST(Sobel, MatchesMatrixOracleOnRandomFields) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GrayImage g = random_gray(seed, 9 + seed % 5, 7 + seed % 3);
    const Gradients s = sobel_gradients(g);
    const auto ref = oracle::sobel_matrix(as_plane(g));
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(s.gx.values()[i], ref.gx.v[i], 1e-9);
      EXPECT_NEAR(s.gy.values()[i], ref.gy.v[i], 1e-9);
    }
  }
}

TEST(Sobel, TooSmall) {
  try {
    sobel_gradients(GrayImage(2, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooSmall);
  }
  EXPECT_THROW(canny(GrayImage(5, 2), {}), Error);
}

TEST(QuantizeDirection, Sectors) {
  constexpr double pi = std::numbers::pi;
  EXPECT_EQ(quantize_direction(0.0), 0);
  EXPECT_EQ(quantize_direction(pi), 0);
  EXPECT_EQ(quantize_direction(-pi), 0);
  EXPECT_EQ(quantize_direction(pi / 4), 1);
  EXPECT_EQ(quantize_direction(-3 * pi / 4), 1);
  EXPECT_EQ(quantize_direction(pi / 2), 2);
  EXPECT_EQ(quantize_direction(-pi / 2), 2);
  EXPECT_EQ(quantize_direction(3 * pi / 4), 3);
  EXPECT_EQ(quantize_direction(-pi / 4), 3);
  EXPECT_EQ(quantize_direction(pi * 22.4 / 180), 0);
  EXPECT_EQ(quantize_direction(pi * 22.6 / 180), 1);
}

TEST(Canny, ConstantImageHasNoEdges) {
  EXPECT_EQ(count_ones(canny(GrayImage(16, 16, 200.0), {})), 0u);
}

TEST(Canny, SubThresholdRampHasNoEdges) {
  GrayImage g(16, 16);
  for (std::size_t y = 0; y < 16; ++y)
    for (std::size_t x = 0; x < 16; ++x) g(x, y) = 3.0 * x;  // Sobel magnitude 24
  EXPECT_EQ(count_ones(canny(g, {})), 0u);
}

TEST(Canny, VerticalStepGivesOneThinLine) {
  const GrayImage g = step_image(12, 10, 6);
  const EdgeMap e = canny(g, {});
  std::size_t column = 99;
  for (std::size_t y = 0; y < 10; ++y) {
    std::size_t in_row = 0;
    for (std::size_t x = 0; x < 12; ++x) {
      if (e(x, y)) {
        ++in_row;
        if (column == 99) column = x;
        EXPECT_EQ(x, column) << "row " << y;
      }
    }
    EXPECT_EQ(in_row, 1u) << "row " << y;
  }
  EXPECT_TRUE(column == 5 || column == 6);
  const auto ref = oracle::canny(as_plane(g), 100.0, 200.0);
  EXPECT_TRUE(std::equal(ref.begin(), ref.end(), e.values().begin()));
}

TEST(Canny, HorizontalAndDiagonalStepsAreThin) {
  GrayImage h(10, 10), d(12, 12);
  for (std::size_t y = 5; y < 10; ++y)
    for (std::size_t x = 0; x < 10; ++x) h(x, y) = 255.0;
  for (std::size_t y = 0; y < 12; ++y)
    for (std::size_t x = 0; x < 12; ++x) d(x, y) = x > y ? 255.0 : 0.0;
  const EdgeMap eh = canny(h, {});
  for (std::size_t x = 0; x < 10; ++x) {
    std::size_t n = 0;
    for (std::size_t y = 0; y < 10; ++y) n += eh(x, y);
    EXPECT_EQ(n, 1u);
  }
  const EdgeMap ed = canny(d, {});
  EXPECT_GT(count_ones(ed), 0u);
  for (std::size_t y = 0; y < 12; ++y) {
    std::size_t n = 0;
    for (std::size_t x = 0; x < 12; ++x) n += ed(x, y);
    EXPECT_LE(n, 2u);
  }
}

TEST(Canny, BorderPixelsAreEligible) {
  const EdgeMap e = canny(step_image(8, 6, 1), {});
  for (std::size_t y = 0; y < 6; ++y) {
    EXPECT_EQ(e(0, y), 1) << y;
    EXPECT_EQ(e(1, y), 0) << y;
  }
}

TEST(Canny, MatchesStraightLineOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GrayImage g = to_grayscale(seed % 2 ? evtest::real_like(seed, 32, 24)
                                              : evtest::noise_image(seed, 20, 20));
    const auto ref = oracle::canny(as_plane(g), 100.0, 200.0);
    const EdgeMap e = canny(g, {});
    EXPECT_TRUE(std::equal(ref.begin(), ref.end(), e.values().begin())) << seed;
  }
}

TEST(Canny, OutputBinaryThinAndHysteresisSound) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const GrayImage g = to_grayscale(evtest::real_like(seed + 100, 40, 40));
    const CannyParams p;
    const EdgeMap e = canny(g, p);
    const Gradients grad = sobel_gradients(g);
    const auto w = static_cast<std::ptrdiff_t>(g.width());
    const auto h = static_cast<std::ptrdiff_t>(g.height());
    auto mag = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
      return (x < 0 || y < 0 || x >= w || y >= h)
                 ? 0.0
                 : grad.magnitude(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};

    std::vector<std::uint8_t> reached(e.size(), 0);
    std::vector<std::size_t> frontier;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
      for (std::ptrdiff_t x = 0; x < w; ++x) {
        const auto v = e(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        ASSERT_LE(v, 1);
        if (!v) continue;
        const int q = quantize_direction(grad.direction(static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
        const double m = mag(x, y);
        EXPECT_GE(m, mag(x + kStep[q][0], y + kStep[q][1]));
        EXPECT_GE(m, mag(x - kStep[q][0], y - kStep[q][1]));
        EXPECT_GE(m, p.t_low);
        if (m >= p.t_high) {
          const auto i = static_cast<std::size_t>(y * w + x);
          reached[i] = 1;
          frontier.push_back(i);
        }
      }
    }
    while (!frontier.empty()) {
      const std::size_t i = frontier.back();
      frontier.pop_back();
      const auto cx = static_cast<std::ptrdiff_t>(i) % w, cy = static_cast<std::ptrdiff_t>(i) / w;
      for (std::ptrdiff_t dy = -1; dy <= 1; ++dy)
        for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
          const auto nx = cx + dx, ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const auto n = static_cast<std::size_t>(ny * w + nx);
          if (e.values()[n] && !reached[n]) {
            reached[n] = 1;
            frontier.push_back(n);
          }
        }
    }
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(reached[i], e.values()[i]) << seed;
  }
}

TEST(Canny, RaisingHighThresholdNeverAddsEdges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GrayImage g = to_grayscale(evtest::real_like(seed + 7, 32, 32));
    CannyParams lo{50.0, 120.0};
    CannyParams hi{50.0, 260.0};
    const EdgeMap a = canny(g, lo), b = canny(g, hi);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(b.values()[i], a.values()[i]);
  }
}

TEST(Canny, InternalBlurEqualsExplicitPreSmooth) {
  const GrayImage g = to_grayscale(evtest::real_like(3, 30, 30));
  CannyParams p;
  p.internal_blur = true;
  EXPECT_EQ(canny(g, p), canny(gaussian_blur(g, 3, 0.8), CannyParams{}));
}
