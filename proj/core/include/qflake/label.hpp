#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace qflake {

/// Binary class label. Flaky is the positive class throughout.
enum class Label : std::uint8_t { NonFlaky = 0, Flaky = 1 };

using Labels = std::vector<Label>;

constexpr std::string_view to_string(Label label) noexcept {
  return label == Label::Flaky ? "flaky" : "nonflaky";
}

constexpr std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "flaky") return Label::Flaky;
  if (text == "nonflaky") return Label::NonFlaky;
  return std::nullopt;
}

constexpr Label flip(Label label) noexcept {
  return label == Label::Flaky ? Label::NonFlaky : Label::Flaky;
}

inline bool is_flaky(Label label) noexcept { return label == Label::Flaky; }

}  // namespace qflake
