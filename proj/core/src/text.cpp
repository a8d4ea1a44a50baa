#include "qflake/text.hpp"

#include <algorithm>

#include "qflake/error.hpp"

namespace qflake {

std::string_view to_string(TokenizerProfile profile) noexcept {
  return profile == TokenizerProfile::StrictCode ? "strict_code" : "default";
}

std::optional<TokenizerProfile> parse_tokenizer_profile(std::string_view text) noexcept {
  if (text == "default") return TokenizerProfile::Default;
  if (text == "strict_code") return TokenizerProfile::StrictCode;
  return std::nullopt;
}

namespace {

// ASCII word characters only; any byte >= 0x80 separates tokens.
constexpr bool is_word_char(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_';
}

constexpr char ascii_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

TokenSequence tokenize(std::string_view text, TokenizerProfile profile) {
  const bool lower = profile == TokenizerProfile::Default;
  const std::size_t min_len = profile == TokenizerProfile::Default ? 2 : 1;
  TokenSequence tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    if (j - i >= min_len) {
      std::string token(text.substr(i, j - i));
      if (lower) std::transform(token.begin(), token.end(), token.begin(), ascii_lower);
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : ordered_(std::move(tokens)) {
  std::sort(ordered_.begin(), ordered_.end());
  ordered_.erase(std::unique(ordered_.begin(), ordered_.end()), ordered_.end());
  index_.reserve(ordered_.size());
  for (std::size_t i = 0; i < ordered_.size(); ++i) index_.emplace(ordered_[i], i);
}

std::optional<std::size_t> Vocabulary::column(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary fit_vocabulary(const std::vector<TokenSequence>& docs) {
  std::vector<std::string> all;
  for (const auto& doc : docs) all.insert(all.end(), doc.begin(), doc.end());
  return Vocabulary(std::move(all));
}

Matrix DocTermMatrix::to_matrix() const {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < counts.size(); ++i) m.data()[i] = static_cast<double>(counts[i]);
  return m;
}

DocTermMatrix transform(const std::vector<TokenSequence>& docs, const Vocabulary& vocab,
                        std::vector<std::string> row_ids) {
  if (!row_ids.empty() && row_ids.size() != docs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row_ids length differs from document count");
  }
  DocTermMatrix dtm;
  dtm.rows = docs.size();
  dtm.cols = vocab.size();
  dtm.counts.assign(dtm.rows * dtm.cols, 0);
  dtm.row_ids = std::move(row_ids);
  for (std::size_t r = 0; r < docs.size(); ++r) {
    for (const auto& token : docs[r]) {
      if (auto col = vocab.column(token)) ++dtm.counts[r * dtm.cols + *col];
    }
  }
  return dtm;
}

}  // namespace qflake
