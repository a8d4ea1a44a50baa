#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qflake/linalg.hpp"

namespace qflake {

/// Default: lowercase, runs of [A-Za-z0-9_] of length >= 2.
/// StrictCode: case preserved, runs of length >= 1.
/// Stop words are never removed in either profile.
enum class TokenizerProfile { Default, StrictCode };

std::string_view to_string(TokenizerProfile profile) noexcept;
std::optional<TokenizerProfile> parse_tokenizer_profile(std::string_view text) noexcept;

using TokenSequence = std::vector<std::string>;

TokenSequence tokenize(std::string_view text,
                       TokenizerProfile profile = TokenizerProfile::Default);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Builds from an arbitrary token list; duplicates are dropped and the
  /// result is sorted.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return ordered_.size(); }
  bool empty() const noexcept { return ordered_.empty(); }
  const std::vector<std::string>& ordered_tokens() const noexcept { return ordered_; }
  std::optional<std::size_t> column(std::string_view token) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.ordered_ == b.ordered_;
  }

 private:
  std::vector<std::string> ordered_;
  std::unordered_map<std::string, std::size_t> index_;
};

Vocabulary fit_vocabulary(const std::vector<TokenSequence>& docs);

/// Raw term counts, one row per document.
struct DocTermMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> counts;  // row-major
  std::vector<std::string> row_ids;

  std::uint32_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
  Matrix to_matrix() const;
};

/// Out-of-vocabulary tokens are ignored. row_ids may be empty or one per doc.
DocTermMatrix transform(const std::vector<TokenSequence>& docs, const Vocabulary& vocab,
                        std::vector<std::string> row_ids = {});

}  // namespace qflake
