#pragma once

#include <cstdint>
#include <vector>

#include "qflake/label.hpp"
#include "qflake/linalg.hpp"

namespace qflake {

/// Provenance of one generated row: row = base + coefficient * (neighbor - base).
struct SyntheticOrigin {
  std::size_t base = 0;      // row index in the input matrix
  std::size_t neighbor = 0;  // row index in the input matrix
  double coefficient = 0.0;  // in [0, 1]
};

struct ResampledSet {
  Matrix x;
  Labels y;
  std::vector<bool> synthetic_mask;      // true exactly on appended rows
  std::vector<SyntheticOrigin> origins;  // one per synthetic row, in append order

  std::size_t synthetic_count() const noexcept { return origins.size(); }
};

inline constexpr int kDefaultSmoteNeighbors = 5;

/// SMOTE to class parity. Minority rows are visited cyclically in a seeded
/// shuffled order; each visit interpolates toward one of its k nearest
/// minority neighbors (Euclidean, ties to lower row index) chosen uniformly.
/// Original rows keep their positions; synthetics are appended.
/// Throws MinorityTooSmall if the minority class has fewer than 2 rows.
ResampledSet smote_resample(const Matrix& x, const Labels& y,
                            int k_neighbors = kDefaultSmoteNeighbors, std::uint64_t seed = 0);

/// Indices (into x) of the k nearest rows to `query` among `candidates`,
/// excluding `query` itself; ties broken by lower index.
std::vector<std::size_t> nearest_minority_neighbors(const Matrix& x,
                                                    const std::vector<std::size_t>& candidates,
                                                    std::size_t query, std::size_t k);

}  // namespace qflake
