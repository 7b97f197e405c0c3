#pragma once

#include <optional>
#include <string_view>

namespace edgeveritas {

/// Binary verdict. `fake` is the positive class everywhere in the toolkit.
enum class Label { real, fake };

constexpr std::string_view to_string(Label label) noexcept {
  return label == Label::fake ? "fake" : "real";
}

constexpr Label flip(Label label) noexcept {
  return label == Label::fake ? Label::real : Label::fake;
}

/// Closed vocabulary: exactly "real" or "fake".
constexpr std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "real") return Label::real;
  if (text == "fake") return Label::fake;
  return std::nullopt;
}

}  // namespace edgeveritas
