#include "qflake/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qflake/error.hpp"
#include "qflake/random.hpp"

namespace qflake {

namespace fs = std::filesystem;

Corpus::Corpus(std::vector<CorpusEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  std::vector<std::string> dups;
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].id == entries_[i - 1].id) dups.push_back(entries_[i].id);
  }
  if (!dups.empty()) {
    throw Error(ErrorCode::DuplicateId, "duplicate corpus id: " + dups.front(), dups);
  }
  for (const auto& e : entries_) {
    if (e.text.empty()) throw Error(ErrorCode::EmptyFile, "empty text for entry " + e.id);
    ++class_counts_[e.label];
  }
}

std::size_t Corpus::count(Label label) const {
  auto it = class_counts_.find(label);
  return it == class_counts_.end() ? 0 : it->second;
}

Labels Corpus::labels() const {
  Labels out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

std::vector<std::string_view> Corpus::texts() const {
  std::vector<std::string_view> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.emplace_back(e.text);
  return out;
}

Corpus Corpus::subset(const std::vector<std::size_t>& positions) const {
  std::vector<CorpusEntry> picked;
  picked.reserve(positions.size());
  for (auto p : positions) picked.push_back(entries_.at(p));
  return Corpus(std::move(picked));
}

std::string Corpus::content_hash() const {
  std::uint64_t h = fnv1a64("");
  for (const auto& e : entries_) {
    h = fnv1a64(e.id, h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(to_string(e.label), h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(e.text, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

bool is_valid_utf8(std::string_view bytes) noexcept {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Failure {
  ErrorCode code;
  std::string message;
};

}  // namespace

Corpus load_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "manifest not found: " + manifest_path.string());
  }
  const fs::path base = manifest_path.parent_path();

  std::vector<CorpusEntry> entries;
  std::vector<Failure> failures;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      failures.push_back({ErrorCode::BadManifest, where + "invalid JSON: " + e.what()});
      continue;
    }
    auto field = [&](const char* key) -> std::optional<std::string> {
      if (!record.is_object() || !record.contains(key) || !record[key].is_string()) {
        return std::nullopt;
      }
      return record[key].get<std::string>();
    };
    auto id = field("id");
    auto path = field("path");
    auto label_text = field("label");
    auto repo = field("repo");
    if (!id || !path || !label_text || !repo) {
      failures.push_back(
          {ErrorCode::BadManifest, where + "record needs string fields id, path, label, repo"});
      continue;
    }
    auto label = parse_label(*label_text);
    if (!label) {
      failures.push_back({ErrorCode::BadLabel, where + "bad label '" + *label_text + "' for " + *id});
      continue;
    }
    if (!seen.insert(*id).second) {
      failures.push_back({ErrorCode::DuplicateId, where + "duplicate id " + *id});
      continue;
    }
    const fs::path file = base / *path;
    auto text = read_file(file);
    if (!text || !fs::is_regular_file(file)) {
      failures.push_back({ErrorCode::MissingFile, where + "missing file " + file.string()});
      continue;
    }
    if (text->empty()) {
      failures.push_back({ErrorCode::EmptyFile, where + "empty file " + file.string()});
      continue;
    }
    if (!is_valid_utf8(*text)) {
      failures.push_back({ErrorCode::InvalidEncoding, where + "not UTF-8: " + file.string()});
      continue;
    }
    entries.push_back(CorpusEntry{*id, file, *label, *repo, std::move(*text)});
  }

  if (!failures.empty()) {
    std::vector<std::string> details;
    for (const auto& f : failures) details.push_back(f.message);
    throw Error(failures.front().code, failures.front().message, std::move(details));
  }
  if (entries.empty()) {
    throw Error(ErrorCode::BadManifest, "no entries in manifest " + manifest_path.string());
  }
  return Corpus(std::move(entries));
}

std::vector<ManifestRecord> scan_directory(const fs::path& root) {
  std::vector<ManifestRecord> records;
  for (Label label : {Label::Flaky, Label::NonFlaky}) {
    const fs::path class_dir = root / std::string(to_string(label));
    if (!fs::is_directory(class_dir)) continue;
    for (const auto& item : fs::recursive_directory_iterator(class_dir)) {
      if (!item.is_regular_file() || item.path().extension() != ".py") continue;
      const fs::path rel = fs::relative(item.path(), root);
      const fs::path below = fs::relative(item.path(), class_dir);
      std::string repo = "unknown";
      if (std::distance(below.begin(), below.end()) > 1) repo = below.begin()->string();
      records.push_back(ManifestRecord{rel.generic_string(), rel.generic_string(), label, repo});
    }
  }
  std::sort(records.begin(), records.end(),
            [](const ManifestRecord& a, const ManifestRecord& b) { return a.id < b.id; });
  return records;
}

std::string manifest_line(const ManifestRecord& record) {
  nlohmann::json j;
  j["id"] = record.id;
  j["path"] = record.path;
  j["label"] = std::string(to_string(record.label));
  j["repo"] = record.repo;
  return j.dump();
}

void write_manifest(const std::vector<ManifestRecord>& records, const fs::path& manifest_path) {
  if (manifest_path.has_parent_path()) fs::create_directories(manifest_path.parent_path());
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + manifest_path.string());
  for (const auto& r : records) out << manifest_line(r) << '\n';
}

std::string_view to_string(SubsetMode mode) noexcept {
  switch (mode) {
    case SubsetMode::Balanced: return "balanced";
    case SubsetMode::Imbalanced: return "imbalanced";
    case SubsetMode::All: return "all";
  }
  return "all";
}

Corpus select_subset(const Corpus& corpus, SubsetMode mode, std::uint64_t seed) {
  const std::size_t n_flaky = corpus.count(Label::Flaky);
  const std::size_t n_non = corpus.count(Label::NonFlaky);
  if (n_flaky == 0 || n_non == 0) {
    throw Error(ErrorCode::EmptyClass, "corpus is missing a class");
  }
  if (mode != SubsetMode::Balanced || n_flaky == n_non) return corpus;

  const Label minority = n_flaky < n_non ? Label::Flaky : Label::NonFlaky;
  std::vector<std::size_t> keep;
  std::vector<std::size_t> majority;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (corpus[i].label == minority ? keep : majority).push_back(i);
  }
  // Partial Fisher-Yates: the first |minority| slots are the sample.
  Rng rng(derive_seed(seed, "balanced-subset"));
  const std::size_t take = keep.size();
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(majority.size() - i));
    std::swap(majority[i], majority[j]);
  }
  keep.insert(keep.end(), majority.begin(), majority.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(keep.begin(), keep.end());
  return corpus.subset(keep);
}

FoldAssignment::FoldAssignment(int n_folds, std::vector<int> fold_of, const Corpus& corpus)
    : n_folds_(n_folds), fold_of_(std::move(fold_of)) {
  for (std::size_t i = 0; i < corpus.size(); ++i) by_id_.emplace(corpus[i].id, fold_of_[i]);
}

std::vector<std::size_t> FoldAssignment::members(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of_.size(); ++i) {
    if (fold_of_[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::complement(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of_.size(); ++i) {
    if (fold_of_[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<int> stratified_fold_indices(const Labels& labels, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 folds");
  std::vector<int> fold_of(labels.size(), -1);
  for (Label label : {Label::Flaky, Label::NonFlaky}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) members.push_back(i);
    }
    if (members.size() < static_cast<std::size_t>(n_folds)) {
      throw Error(ErrorCode::TooFewSamples,
                  "class " + std::string(to_string(label)) + " has " +
                      std::to_string(members.size()) + " members, fewer than " +
                      std::to_string(n_folds) + " folds");
    }
    Rng rng(derive_seed(seed, "stratified-folds", static_cast<std::uint64_t>(label)));
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t k = 0; k < members.size(); ++k) {
      fold_of[members[k]] = static_cast<int>(k % static_cast<std::size_t>(n_folds));
    }
  }
  return fold_of;
}

FoldAssignment stratified_folds(const Corpus& corpus, int n_folds, std::uint64_t seed) {
  return FoldAssignment(n_folds, stratified_fold_indices(corpus.labels(), n_folds, seed), corpus);
}

}  // namespace qflake
