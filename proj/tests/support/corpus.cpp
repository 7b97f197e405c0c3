#include "corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace evtest {

using edgeveritas::Label;
using edgeveritas::LabeledImage;
using edgeveritas::Rgb;
using edgeveritas::RgbImage;

namespace {

using Plane = std::vector<double>;

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

std::array<Plane, 3> texture_planes(std::uint64_t seed, std::size_t w, std::size_t h) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Plane base(w * h, 128.0);
  for (int s = 0; s < 3; ++s) {
    const double freq = 0.08 + 0.25 * unit(rng);
    const double theta = std::numbers::pi * unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const double amp = 20.0 + 20.0 * unit(rng);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double t = freq * (std::cos(theta) * x + std::sin(theta) * y) + phase;
        base[y * w + x] += amp * std::sin(t);
      }
    }
  }
  for (int r = 0; r < 3; ++r) {
    const auto x0 = static_cast<std::size_t>(unit(rng) * w * 0.7);
    const auto y0 = static_cast<std::size_t>(unit(rng) * h * 0.7);
    const auto x1 = std::min(w, x0 + 4 + static_cast<std::size_t>(unit(rng) * w * 0.4));
    const auto y1 = std::min(h, y0 + 4 + static_cast<std::size_t>(unit(rng) * h * 0.4));
    const double shift = unit(rng) < 0.5 ? -70.0 : 70.0;
    for (std::size_t y = y0; y < y1; ++y)
      for (std::size_t x = x0; x < x1; ++x) base[y * w + x] += shift;
  }
  for (int d = 0; d < 2; ++d) {
    const double cx = unit(rng) * w, cy = unit(rng) * h;
    const double radius = 3.0 + unit(rng) * w * 0.2;
    const double shift = unit(rng) < 0.5 ? -60.0 : 60.0;
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        if (std::hypot(x - cx, y - cy) <= radius) base[y * w + x] += shift;
  }

  std::array<Plane, 3> planes;
  for (auto& plane : planes) {
    const double gain = 0.8 + 0.4 * unit(rng);
    const double offset = -20.0 + 40.0 * unit(rng);
    plane.resize(w * h);
    for (std::size_t i = 0; i < w * h; ++i) plane[i] = base[i] * gain + offset;
  }
  return planes;
}

RgbImage from_planes(const std::array<Plane, 3>& p, std::size_t w, std::size_t h) {
  RgbImage img(w, h);
  auto px = img.pixels();
  for (std::size_t i = 0; i < w * h; ++i) px[i] = {to_byte(p[0][i]), to_byte(p[1][i]), to_byte(p[2][i])};
  return img;
}

Plane smooth(const Plane& in, std::size_t w, std::size_t h, int radius, double sigma) {
  std::vector<double> k;
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k.push_back(std::exp(-i * i / (2.0 * sigma * sigma)));
    sum += k.back();
  }
  for (double& v : k) v /= sum;
  auto clampi = [](long v, long hi) { return std::clamp(v, 0L, hi - 1); };
  Plane tmp(w * h), out(w * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[i + radius] * in[y * w + clampi(static_cast<long>(x) + i, static_cast<long>(w))];
      tmp[y * w + x] = acc;
    }
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[i + radius] * tmp[clampi(static_cast<long>(y) + i, static_cast<long>(h)) * w + x];
      out[y * w + x] = acc;
    }
  return out;
}

}  // namespace

RgbImage texture(std::uint64_t seed, std::size_t width, std::size_t height) {
  return from_planes(texture_planes(seed, width, height), width, height);
}

RgbImage real_like(std::uint64_t seed, std::size_t width, std::size_t height) {
  auto planes = texture_planes(seed, width, height);
  std::mt19937_64 rng(seed ^ 0xA5A5A5A5DEADBEEFULL);
  std::normal_distribution<double> noise(0.0, 20.0);
  for (auto& plane : planes)
    for (double& v : plane) v += noise(rng);
  return from_planes(planes, width, height);
}

RgbImage fake_like(std::uint64_t seed, std::size_t width, std::size_t height) {
  auto planes = texture_planes(seed, width, height);
  for (auto& plane : planes) plane = smooth(plane, width, height, 12, 4.0);
  return from_planes(planes, width, height);
}

std::vector<LabeledImage> synthetic_corpus(std::size_t per_class, std::uint64_t seed,
                                           std::size_t size) {
  std::vector<LabeledImage> corpus;
  corpus.reserve(2 * per_class);
  auto name = [](const char* cls, std::size_t i) {
    std::string digits = std::to_string(i);
    return std::string(cls) + "/img" + std::string(4 - std::min<std::size_t>(4, digits.size()), '0') +
           digits + ".png";
  };
  for (std::size_t i = 0; i < per_class; ++i)
    corpus.push_back({name("real", i), real_like(seed + i, size, size), Label::real});
  for (std::size_t i = 0; i < per_class; ++i)
    corpus.push_back({name("fake", i), fake_like(seed + i, size, size), Label::fake});
  return corpus;
}

edgeveritas::Manifest write_corpus(const std::vector<LabeledImage>& corpus,
                                   const std::filesystem::path& root) {
  for (const LabeledImage& item : corpus) {
    const auto path = root / item.id;
    std::filesystem::create_directories(path.parent_path());
    edgeveritas::save_image(item.image, path);
  }
  return edgeveritas::ingest_dataset(root, true);
}

RgbImage noise_image(std::uint64_t seed, std::size_t width, std::size_t height) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  RgbImage img(width, height);
  for (Rgb& p : img.pixels()) {
    p = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
         static_cast<std::uint8_t>(byte(rng))};
  }
  return img;
}

}  // namespace evtest
