#include "edgeveritas/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <utility>

#include "edgeveritas/edgekernel.hpp"
#include "edgeveritas/parallel.hpp"

namespace edgeveritas {

std::string_view to_string(DegradationKind kind) noexcept {
  switch (kind) {
    case DegradationKind::gaussian_noise: return "gaussian_noise";
    case DegradationKind::salt_pepper: return "salt_pepper";
    case DegradationKind::speckle: return "speckle";
    case DegradationKind::gaussian_blur: return "gaussian_blur";
    case DegradationKind::motion_blur: return "motion_blur";
    case DegradationKind::median_blur: return "median_blur";
    case DegradationKind::random_patch: return "random_patch";
    case DegradationKind::fixed_pattern: return "fixed_pattern";
  }
  return "gaussian_noise";
}

std::optional<DegradationKind> parse_degradation(std::string_view text) noexcept {
  for (const DegradationKind kind : kAllDegradations) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

DegradationSpec DegradationSpec::defaults(DegradationKind kind, std::uint64_t seed) {
  DegradationSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  switch (kind) {
    case DegradationKind::speckle: spec.sigma = 0.1; break;
    case DegradationKind::gaussian_blur: spec.sigma = 1.0; break;
    default: break;
  }
  return spec;
}

void DegradationSpec::validate() const {
  auto bad = [&](const std::string& what) {
    return Error(ErrorCode::BadParams, std::string(to_string(kind)) + ": " + what);
  };
  switch (kind) {
    case DegradationKind::gaussian_noise:
    case DegradationKind::speckle:
      if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw bad("sigma must be finite and >= 0");
      break;
    case DegradationKind::salt_pepper:
      if (!(density >= 0.0 && density <= 1.0)) throw bad("density must lie in [0, 1]");
      break;
    case DegradationKind::gaussian_blur:
      if (kernel < 1 || kernel % 2 == 0) throw bad("kernel must be odd and >= 1");
      if (!(sigma > 0.0)) throw bad("sigma must be > 0");
      break;
    case DegradationKind::motion_blur:
      if (length < 1) throw bad("length must be >= 1");
      break;
    case DegradationKind::median_blur:
      if (kernel < 1 || kernel % 2 == 0) throw bad("kernel must be odd and >= 1");
      break;
    case DegradationKind::random_patch:
      if (!(area_fraction > 0.0 && area_fraction <= 1.0)) throw bad("area_fraction must lie in (0, 1]");
      break;
    case DegradationKind::fixed_pattern:
      if (spacing < 2) throw bad("spacing must be >= 2");
      break;
  }
}

nlohmann::json to_json(const DegradationSpec& spec) {
  nlohmann::json j = {{"kind", to_string(spec.kind)}, {"seed", spec.seed}};
  switch (spec.kind) {
    case DegradationKind::gaussian_noise:
    case DegradationKind::speckle: j["sigma"] = spec.sigma; break;
    case DegradationKind::salt_pepper: j["density"] = spec.density; break;
    case DegradationKind::gaussian_blur:
      j["kernel"] = spec.kernel;
      j["sigma"] = spec.sigma;
      break;
    case DegradationKind::motion_blur: j["length"] = spec.length; break;
    case DegradationKind::median_blur: j["kernel"] = spec.kernel; break;
    case DegradationKind::random_patch: j["area_fraction"] = spec.area_fraction; break;
    case DegradationKind::fixed_pattern: j["spacing"] = spec.spacing; break;
  }
  return j;
}

namespace {

// Counter-based randomness: every draw is a pure function of
// (seed, image key, counter), so no generator state is shared or ordered.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view key) : base_(mix64(mix64(seed) ^ fnv1a(key))) {}

  std::uint64_t bits(std::uint64_t counter) const noexcept { return mix64(base_ ^ mix64(counter)); }

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on two consecutive counters.
  double normal(std::uint64_t counter) const noexcept {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t base_;
};

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

std::uint8_t& channel(Rgb& p, int c) { return c == 0 ? p.r : (c == 1 ? p.g : p.b); }
std::uint8_t channel(const Rgb& p, int c) { return c == 0 ? p.r : (c == 1 ? p.g : p.b); }

// Applies `f(value, pixel_index, channel)` to every channel value.
template <typename F>
RgbImage map_channels(const RgbImage& image, F&& f) {
  RgbImage out = image;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (int c = 0; c < 3; ++c) channel(px[i], c) = to_byte(f(channel(px[i], c), i, c));
  }
  return out;
}

// Runs a gray-field filter independently on each channel.
RgbImage per_channel(const RgbImage& image, const std::function<GrayImage(const GrayImage&)>& filter) {
  RgbImage out = image;
  for (int c = 0; c < 3; ++c) {
    GrayImage plane(image.width(), image.height());
    auto src = image.pixels();
    auto dst = plane.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = channel(src[i], c);
    const GrayImage filtered = filter(plane);
    auto px = out.pixels();
    const auto vals = filtered.values();
    for (std::size_t i = 0; i < px.size(); ++i) channel(px[i], c) = to_byte(vals[i]);
  }
  return out;
}

RgbImage salt_and_pepper(const RgbImage& image, double density, const CounterRng& rng) {
  RgbImage out = image;
  auto px = out.pixels();
  const std::size_t n = px.size();
  const auto k = static_cast<std::size_t>(std::llround(density * static_cast<double>(n)));
  if (k == 0) return out;

  std::vector<std::pair<std::uint64_t, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {rng.bits(i), i};
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  for (std::size_t rank = 0; rank < k; ++rank) {
    const std::uint8_t v = rank % 2 == 0 ? 0 : 255;
    px[order[rank].second] = {v, v, v};
  }
  return out;
}

RgbImage motion_blur(const RgbImage& image, int length) {
  const auto before = static_cast<std::ptrdiff_t>((length - 1) / 2);
  const auto after = static_cast<std::ptrdiff_t>(length / 2);
  return per_channel(image, [&](const GrayImage& g) {
    GrayImage out(g.width(), g.height());
    for (std::size_t y = 0; y < g.height(); ++y) {
      for (std::size_t x = 0; x < g.width(); ++x) {
        double acc = 0.0;
        for (std::ptrdiff_t k = -before; k <= after; ++k) {
          acc += g.clamped(static_cast<std::ptrdiff_t>(x) + k, static_cast<std::ptrdiff_t>(y));
        }
        out(x, y) = acc / static_cast<double>(length);
      }
    }
    return out;
  });
}

RgbImage median_blur(const RgbImage& image, int kernel) {
  const std::ptrdiff_t r = kernel / 2;
  return per_channel(image, [&](const GrayImage& g) {
    GrayImage out(g.width(), g.height());
    std::vector<double> window(static_cast<std::size_t>(kernel * kernel));
    for (std::size_t y = 0; y < g.height(); ++y) {
      for (std::size_t x = 0; x < g.width(); ++x) {
        std::size_t n = 0;
        for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
          for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
            window[n++] = g.clamped(static_cast<std::ptrdiff_t>(x) + dx,
                                    static_cast<std::ptrdiff_t>(y) + dy);
          }
        }
        const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        out(x, y) = *mid;
      }
    }
    return out;
  });
}

RgbImage random_patch(const RgbImage& image, double fraction, const CounterRng& rng) {
  const std::size_t w = image.width();
  const std::size_t h = image.height();
  const double area = fraction * static_cast<double>(w) * static_cast<double>(h);
  const auto pw = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(static_cast<double>(w) * std::sqrt(fraction))), 1, w);
  const auto ph = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(area / static_cast<double>(pw))), 1, h);
  // Counters past any pixel index keep placement independent of pixel draws.
  constexpr std::uint64_t kPlacement = ~std::uint64_t{0} - 1;
  const auto x0 = static_cast<std::size_t>(rng.uniform(kPlacement) * static_cast<double>(w - pw + 1));
  const auto y0 = static_cast<std::size_t>(rng.uniform(kPlacement - 1) * static_cast<double>(h - ph + 1));

  RgbImage out = image;
  for (std::size_t y = y0; y < std::min(h, y0 + ph); ++y) {
    for (std::size_t x = x0; x < std::min(w, x0 + pw); ++x) out(x, y) = {0, 0, 0};
  }
  return out;
}

RgbImage fixed_pattern(const RgbImage& image, int spacing) {
  RgbImage out = image;
  const auto s = static_cast<std::size_t>(spacing);
  for (std::size_t y = 0; y < out.height(); ++y) {
    for (std::size_t x = 0; x < out.width(); ++x) {
      if (x % s == 0 || y % s == 0) out(x, y) = {0, 0, 0};
    }
  }
  return out;
}

}  // namespace

RgbImage apply_degradation(const RgbImage& image, const DegradationSpec& spec,
                           std::string_view image_key) {
  spec.validate();
  if (image.empty()) throw Error(ErrorCode::BadParams, "cannot degrade an empty image");
  const CounterRng rng(spec.seed, image_key);

  switch (spec.kind) {
    case DegradationKind::gaussian_noise:
      return map_channels(image, [&](std::uint8_t v, std::size_t i, int c) {
        return v + spec.sigma * rng.normal(3 * i + static_cast<std::size_t>(c));
      });
    case DegradationKind::salt_pepper:
      return salt_and_pepper(image, spec.density, rng);
    case DegradationKind::speckle:
      return map_channels(image, [&](std::uint8_t v, std::size_t i, int c) {
        return v * (1.0 + spec.sigma * rng.normal(3 * i + static_cast<std::size_t>(c)));
      });
    case DegradationKind::gaussian_blur:
      return per_channel(image, [&](const GrayImage& g) {
        return edgeveritas::gaussian_blur(g, spec.kernel, spec.sigma);
      });
    case DegradationKind::motion_blur:
      return motion_blur(image, spec.length);
    case DegradationKind::median_blur:
      return median_blur(image, spec.kernel);
    case DegradationKind::random_patch:
      return random_patch(image, spec.area_fraction, rng);
    case DegradationKind::fixed_pattern:
      return fixed_pattern(image, spec.spacing);
  }
  return image;
}

namespace {

using CorpusAccess = std::function<std::optional<LabeledImage>(std::size_t)>;

DegradationRow run_experiment(std::size_t n, const CorpusAccess& get, const DegradationSpec& spec,
                              const ScoringOptions& options, CenterStrategy strategy,
                              OrientationMode mode, unsigned threads) {
  spec.validate();
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "degradation corpus is empty");

  struct Scored {
    double score;
    Label label;
  };
  std::vector<std::optional<Scored>> slots(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::optional<LabeledImage> item;
    try {
      item = get(i);
      if (!item) return;
      const RgbImage degraded = apply_degradation(item->image, spec, item->id);
      slots[i] = Scored{score_image(degraded, options).score, item->label};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BadParams) throw;
    }
  });

  std::vector<double> real, fake;
  for (const auto& s : slots) {
    if (!s) continue;
    (s->label == Label::fake ? fake : real).push_back(s->score);
  }
  if (real.empty() && fake.empty()) throw Error(ErrorCode::EmptyDataset, "no image could be scored");
  if (real.empty() || fake.empty()) {
    throw Error(ErrorCode::MissingClass, "degradation experiment needs both classes");
  }

  const CalibrationResult cal = valley_threshold(real, fake, strategy);
  std::size_t correct = 0;
  for (const auto& s : slots) {
    if (s && classify_score(s->score, cal, mode) == s->label) ++correct;
  }
  DegradationRow row;
  row.kind = spec.kind;
  row.n_real = real.size();
  row.n_fake = fake.size();
  row.threshold = cal.threshold;
  row.accuracy = static_cast<double>(correct) / static_cast<double>(real.size() + fake.size());
  return row;
}

}  // namespace

DegradationRow degradation_experiment(const std::vector<LabeledImage>& corpus,
                                      const DegradationSpec& spec, const ScoringOptions& options,
                                      CenterStrategy strategy, OrientationMode mode,
                                      unsigned threads) {
  return run_experiment(
      corpus.size(), [&](std::size_t i) { return std::optional<LabeledImage>(corpus[i]); }, spec,
      options, strategy, mode, threads);
}

DegradationRow degradation_experiment(const Manifest& manifest, const DegradationSpec& spec,
                                      const ScoringOptions& options, CenterStrategy strategy,
                                      OrientationMode mode, unsigned threads) {
  std::vector<const ManifestEntry*> labeled;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.label) labeled.push_back(&e);
  }
  if (labeled.empty()) {
    throw Error(ErrorCode::EmptyDataset, "manifest has no labeled entries");
  }
  return run_experiment(
      labeled.size(),
      [&](std::size_t i) -> std::optional<LabeledImage> {
        const ManifestEntry& e = *labeled[i];
        return LabeledImage{e.id, load_image(e.path), *e.label};
      },
      spec, options, strategy, mode, threads);
}

std::vector<LabeledImage> load_labeled_corpus(const Manifest& manifest) {
  std::vector<LabeledImage> corpus;
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.label) continue;
    try {
      corpus.push_back({e.id, load_image(e.path), *e.label});
    } catch (const Error&) {
      // undecodable entries are skipped, as during ingestion
    }
  }
  return corpus;
}

void write_degradation_csv(const std::vector<DegradationRow>& rows,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_degradation_csv(rows, out);
}

void write_degradation_csv(const std::vector<DegradationRow>& rows, std::ostream& out) {
  out << "kind,n_real,n_fake,threshold,accuracy\n";
  char buf[64];
  for (const DegradationRow& r : rows) {
    out << to_string(r.kind) << ',' << r.n_real << ',' << r.n_fake << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.threshold, r.accuracy);
    out << buf << '\n';
  }
}

}  // namespace edgeveritas
