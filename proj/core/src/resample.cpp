#include "qflake/resample.hpp"

#include <algorithm>
#include <utility>

#include "qflake/error.hpp"
#include "qflake/random.hpp"

namespace qflake {

std::vector<std::size_t> nearest_minority_neighbors(const Matrix& x,
                                                    const std::vector<std::size_t>& candidates,
                                                    std::size_t query, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(candidates.size());
  for (auto c : candidates) {
    if (c == query) continue;
    dist.emplace_back(squared_distance(x.row(query), x.row(c)), c);
  }
  k = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(dist[i].second);
  return out;
}

ResampledSet smote_resample(const Matrix& x, const Labels& y, int k_neighbors,
                            std::uint64_t seed) {
  if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X rows differ from labels");
  if (k_neighbors < 1) throw Error(ErrorCode::SpecInvalid, "k_neighbors must be >= 1");

  std::vector<std::size_t> flaky;
  std::vector<std::size_t> non;
  for (std::size_t i = 0; i < y.size(); ++i) (is_flaky(y[i]) ? flaky : non).push_back(i);

  ResampledSet out{x, y, std::vector<bool>(y.size(), false), {}};
  if (flaky.size() == non.size()) return out;

  const bool flaky_minor = flaky.size() < non.size();
  const auto& minority = flaky_minor ? flaky : non;
  const Label minority_label = flaky_minor ? Label::Flaky : Label::NonFlaky;
  const std::size_t deficit = (flaky_minor ? non.size() : flaky.size()) - minority.size();
  if (minority.size() < 2) {
    throw Error(ErrorCode::MinorityTooSmall, "SMOTE needs at least 2 minority rows");
  }
  const std::size_t k =
      std::min(static_cast<std::size_t>(k_neighbors), minority.size() - 1);

  std::vector<std::vector<std::size_t>> neighbors;
  neighbors.reserve(minority.size());
  for (auto m : minority) neighbors.push_back(nearest_minority_neighbors(x, minority, m, k));

  Rng rng(derive_seed(seed, "smote"));
  std::vector<std::size_t> order(minority.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<double> row(x.cols());
  for (std::size_t t = 0; t < deficit; ++t) {
    const std::size_t slot = order[t % order.size()];
    const std::size_t base = minority[slot];
    const std::size_t nb = neighbors[slot][rng.below(k)];
    const double u = rng.uniform_closed();
    auto a = x.row(base);
    auto b = x.row(nb);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = a[j] + u * (b[j] - a[j]);
    out.x.append_row(row);
    out.y.push_back(minority_label);
    out.synthetic_mask.push_back(true);
    out.origins.push_back({base, nb, u});
  }
  return out;
}

}  // namespace qflake
