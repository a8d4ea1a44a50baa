#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qflake/label.hpp"

namespace qflake {

struct CorpusEntry {
  std::string id;
  std::filesystem::path path;
  Label label = Label::NonFlaky;
  std::string repo;
  std::string text;
};

/// Immutable, id-sorted collection of labeled source files.
class Corpus {
 public:
  Corpus() = default;
  /// Sorts by id and rejects duplicate ids (DuplicateId) and empty texts (EmptyFile).
  explicit Corpus(std::vector<CorpusEntry> entries);

  const std::vector<CorpusEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const CorpusEntry& operator[](std::size_t i) const { return entries_[i]; }

  std::size_t count(Label label) const;
  const std::map<Label, std::size_t>& class_counts() const noexcept { return class_counts_; }

  Labels labels() const;
  std::vector<std::string_view> texts() const;

  /// Sub-corpus made of the given entry positions.
  Corpus subset(const std::vector<std::size_t>& positions) const;

  /// Stable 64-bit content hash over (id, label, text) of every entry, hex encoded.
  std::string content_hash() const;

 private:
  std::vector<CorpusEntry> entries_;
  std::map<Label, std::size_t> class_counts_;
};

/// One manifest line: {"id", "path", "label", "repo"}.
struct ManifestRecord {
  std::string id;
  std::string path;  // relative to the manifest directory
  Label label = Label::NonFlaky;
  std::string repo;
};

/// Loads a JSON Lines manifest and the files it references. Every record is
/// checked; the thrown Error carries the first failure's code and one
/// diagnostic line per bad record.
Corpus load_manifest(const std::filesystem::path& manifest_path);

/// Scans `<root>/flaky/**` and `<root>/nonflaky/**` for `.py` files. Ids are
/// root-relative paths; repo is the first directory below the class folder.
std::vector<ManifestRecord> scan_directory(const std::filesystem::path& root);

std::string manifest_line(const ManifestRecord& record);
void write_manifest(const std::vector<ManifestRecord>& records,
                    const std::filesystem::path& manifest_path);

bool is_valid_utf8(std::string_view bytes) noexcept;

enum class SubsetMode { Balanced, Imbalanced, All };

std::string_view to_string(SubsetMode mode) noexcept;

/// Balanced keeps every minority entry plus an equal-size seeded sample of the
/// majority class. Imbalanced and All return the corpus unchanged.
Corpus select_subset(const Corpus& corpus, SubsetMode mode, std::uint64_t seed);

/// Fold index per corpus position, plus the id lookup.
class FoldAssignment {
 public:
  FoldAssignment(int n_folds, std::vector<int> fold_of, const Corpus& corpus);

  int n_folds() const noexcept { return n_folds_; }
  int fold_of(std::size_t position) const { return fold_of_[position]; }
  const std::vector<int>& folds() const noexcept { return fold_of_; }
  int fold_of(const std::string& id) const { return by_id_.at(id); }
  const std::unordered_map<std::string, int>& assignment() const noexcept { return by_id_; }

  std::vector<std::size_t> members(int fold) const;
  std::vector<std::size_t> complement(int fold) const;

  friend bool operator==(const FoldAssignment& a, const FoldAssignment& b) {
    return a.n_folds_ == b.n_folds_ && a.fold_of_ == b.fold_of_;
  }

 private:
  int n_folds_;
  std::vector<int> fold_of_;
  std::unordered_map<std::string, int> by_id_;
};

/// Per-class seeded shuffle followed by round-robin assignment.
FoldAssignment stratified_folds(const Corpus& corpus, int n_folds, std::uint64_t seed);

/// Same procedure over a bare label vector; returns the fold of each position.
std::vector<int> stratified_fold_indices(const Labels& labels, int n_folds, std::uint64_t seed);

}  // namespace qflake
