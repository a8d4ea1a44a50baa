#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "qflake/corpus.hpp"
#include "qflake/linalg.hpp"
#include "qflake/random.hpp"

namespace qflake::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("qflake-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// In-memory corpus with ids "<label>/doc<i>.py".
inline Corpus make_corpus(const std::vector<std::pair<Label, std::string>>& docs) {
  std::vector<CorpusEntry> entries;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CorpusEntry e;
    e.label = docs[i].first;
    e.id = std::string(to_string(e.label)) + "/doc" + std::to_string(1000 + i) + ".py";
    e.path = e.id;
    e.repo = "repo";
    e.text = docs[i].second;
    entries.push_back(std::move(e));
  }
  return Corpus(std::move(entries));
}

/// Seeded separable 2-D set: flaky in [1,3]^2, non-flaky in [-3,-1]^2.
inline std::pair<Matrix, Labels> separable_set(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(2 * per_class, 2);
  Labels y;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool flaky = i % 2 == 0;
    const double lo = flaky ? 1.0 : -3.0;
    x(i, 0) = lo + 2.0 * rng.uniform01();
    x(i, 1) = lo + 2.0 * rng.uniform01();
    y.push_back(flaky ? Label::Flaky : Label::NonFlaky);
  }
  return {std::move(x), std::move(y)};
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = scale * (2.0 * rng.uniform01() - 1.0);
  return m;
}

}  // namespace qflake::testing
