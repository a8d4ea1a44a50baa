#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qflake/corpus.hpp"

namespace qflake {

/// Generator for a stand-in corpus of Python-like quantum test files. Flaky
/// files lean on sampling, seeding, sleeps and tolerance asserts; non-flaky
/// files lean on exact asserts, with overlap in both directions.
struct SynthOptions {
  std::size_t flaky = 45;
  std::size_t non_flaky = 243;
  std::uint64_t seed = 2024;
};

/// Entries with ids of the form `<flaky|nonflaky>/<repo>/test_<name>.py`.
std::vector<CorpusEntry> synthesize_corpus(const SynthOptions& options = {});

/// Writes the files under `root` plus `root/manifest.jsonl`; returns the
/// manifest path.
std::filesystem::path write_synthetic_corpus(const std::filesystem::path& root,
                                             const SynthOptions& options = {});

}  // namespace qflake
