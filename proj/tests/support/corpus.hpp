#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "edgeveritas/degrade.hpp"
#include "edgeveritas/imgio.hpp"

namespace evtest {

/// Structured texture: a few oriented sinusoids plus flat rectangles and
/// discs, tinted per channel.
edgeveritas::RgbImage texture(std::uint64_t seed, std::size_t width, std::size_t height);

/// Texture with additive Gaussian noise (sigma 20 per channel).
edgeveritas::RgbImage real_like(std::uint64_t seed, std::size_t width, std::size_t height);

/// The same texture smoothed with a 25-tap Gaussian, sigma 4.
edgeveritas::RgbImage fake_like(std::uint64_t seed, std::size_t width, std::size_t height);

/// `per_class` real-like and fake-like images; image i of each class shares
/// texture seed `seed + i`.
std::vector<edgeveritas::LabeledImage> synthetic_corpus(std::size_t per_class, std::uint64_t seed,
                                                        std::size_t size = 64);

/// Writes the corpus as PNGs under root/real and root/fake and ingests it.
edgeveritas::Manifest write_corpus(const std::vector<edgeveritas::LabeledImage>& corpus,
                                   const std::filesystem::path& root);

/// Uniform random 8-bit image.
edgeveritas::RgbImage noise_image(std::uint64_t seed, std::size_t width, std::size_t height);

}  // namespace evtest
