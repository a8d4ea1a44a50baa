#pragma once

// Greedy axis-aligned tree growth shared by the classification trees and the
// boosted regression trees. Columns are indexed once per training call as
// value-sorted lists of their non-zero entries; zeros are handled as one
// aggregate block, which keeps split search proportional to the number of
// non-zeros (bag-of-words matrices are mostly zeros).

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qflake/classifiers.hpp"
#include "qflake/linalg.hpp"
#include "qflake/random.hpp"

namespace qflake::detail {

struct ColumnEntry {
  double value;
  std::uint32_t row;
};

class SortedColumns {
 public:
  explicit SortedColumns(const Matrix& x);

  std::size_t n_features() const noexcept { return columns_.size(); }
  const std::vector<ColumnEntry>& column(std::size_t f) const { return columns_[f]; }

 private:
  std::vector<std::vector<ColumnEntry>> columns_;
};

/// Feature sampling for one node: nullopt means "scan every feature in index
/// order"; otherwise up to `max_features` non-constant features are drawn in
/// random order from `rng`.
struct FeatureSampling {
  std::optional<std::size_t> max_features;
  Rng* rng = nullptr;
};

// Policy contract:
//   using Stats = ...;              // additive node statistics
//   Stats row(std::uint32_t r) const;
//   Stats add(Stats, Stats) const; Stats sub(Stats, Stats) const;
//   std::size_t count(const Stats&) const;   // distinct rows
//   double leaf_value(const Stats&) const;
//   bool terminal(const Stats&, int depth) const;
//   std::optional<double> gain(const Stats& parent, const Stats& left, const Stats& right) const;
template <class Policy>
class TreeBuilder {
 public:
  using Stats = typename Policy::Stats;

  TreeBuilder(const Matrix& x, const SortedColumns& columns, const Policy& policy)
      : x_(x), columns_(columns), policy_(policy), mark_(x.rows(), 0) {}

  Tree build(std::vector<std::uint32_t> rows, FeatureSampling sampling) {
    Tree tree;
    sampling_ = sampling;
    features_.resize(columns_.n_features());
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  struct Candidate {
    double gain = -std::numeric_limits<double>::infinity();
    int feature = -1;
    double threshold = 0.0;
  };

  int grow(Tree& tree, std::vector<std::uint32_t> rows, int depth) {
    Stats total{};
    for (auto r : rows) total = policy_.add(total, policy_.row(r));
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, policy_.leaf_value(total), depth, rows.size()});
    if (policy_.terminal(total, depth)) return index;

    const Candidate best = find_split(rows, total);
    if (best.feature < 0) return index;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (auto r : rows) {
      (x_(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[index].feature = best.feature;
    tree.nodes[index].threshold = best.threshold;
    const int l = grow(tree, std::move(left), depth + 1);
    const int r = grow(tree, std::move(right), depth + 1);
    tree.nodes[index].left = l;
    tree.nodes[index].right = r;
    return index;
  }

  Candidate find_split(const std::vector<std::uint32_t>& rows, const Stats& total) {
    ++stamp_;
    for (auto r : rows) mark_[r] = stamp_;
    Candidate best;

    if (!sampling_.max_features) {
      for (std::size_t f = 0; f < columns_.n_features(); ++f) scan_feature(f, rows, total, best);
      return best;
    }
    // Draw features without replacement; only non-constant ones count.
    for (std::size_t f = 0; f < features_.size(); ++f) features_[f] = f;
    std::size_t visited = 0;
    for (std::size_t i = 0; i < features_.size() && visited < *sampling_.max_features; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(sampling_.rng->below(features_.size() - i));
      std::swap(features_[i], features_[j]);
      if (scan_feature(features_[i], rows, total, best)) ++visited;
    }
    return best;
  }

  // Returns false if the feature is constant within the node.
  bool scan_feature(std::size_t f, const std::vector<std::uint32_t>& rows, const Stats& total,
                    Candidate& best) {
    buffer_.clear();
    Stats nonzero{};
    for (const auto& e : columns_.column(f)) {
      if (mark_[e.row] == stamp_) {
        buffer_.push_back(e);
        nonzero = policy_.add(nonzero, policy_.row(e.row));
      }
    }
    const std::size_t zero_count = rows.size() - buffer_.size();
    if (buffer_.empty()) return false;
    if (zero_count == 0 && buffer_.front().value == buffer_.back().value) return false;
    const Stats zero = policy_.sub(total, nonzero);

    Stats left{};
    bool have_prev = false;
    double prev = 0.0;
    auto boundary = [&](double next_value) {
      if (have_prev && next_value != prev) {
        const Stats right = policy_.sub(total, left);
        if (auto g = policy_.gain(total, left, right)) {
          const int fi = static_cast<int>(f);
          if (*g > best.gain || (*g == best.gain && fi < best.feature)) {
            best.gain = *g;
            best.feature = fi;
            double mid = prev + (next_value - prev) / 2.0;
            if (mid >= next_value) mid = prev;  // adjacent doubles
            best.threshold = mid;
          }
        }
      }
    };
    std::size_t i = 0;
    for (; i < buffer_.size() && buffer_[i].value < 0.0; ++i) {
      boundary(buffer_[i].value);
      left = policy_.add(left, policy_.row(buffer_[i].row));
      prev = buffer_[i].value;
      have_prev = true;
    }
    if (zero_count > 0) {
      boundary(0.0);
      left = policy_.add(left, zero);
      prev = 0.0;
      have_prev = true;
    }
    for (; i < buffer_.size(); ++i) {
      boundary(buffer_[i].value);
      left = policy_.add(left, policy_.row(buffer_[i].row));
      prev = buffer_[i].value;
      have_prev = true;
    }
    return true;
  }

  const Matrix& x_;
  const SortedColumns& columns_;
  const Policy& policy_;
  FeatureSampling sampling_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<ColumnEntry> buffer_;
  std::vector<std::size_t> features_;
};

}  // namespace qflake::detail
