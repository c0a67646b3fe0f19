#include "cssl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cssl {

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: scores/labels length mismatch");
  const std::size_t total = scores.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("auc: non-finite score");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the positive rank sum, with tied groups sharing their mean rank,
  // kept in integers so the result is exact.
  std::int64_t pos = 0;
  std::int64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j < total && scores[order[j]] == scores[order[i]]) ++j;
    // ranks i+1 .. j, mean (i + 1 + j) / 2
    const auto twice_mean = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) {
        ++pos;
        twice_rank_sum += twice_mean;
      }
    i = j;
  }
  const std::int64_t neg = static_cast<std::int64_t>(total) - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("auc: needs at least one positive and one negative");
  const std::int64_t twice_u = twice_rank_sum - pos * (pos + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

double auc(std::span<const ScoredPair> pairs) {
  std::vector<double> scores(pairs.size());
  std::vector<std::uint8_t> labels(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    scores[k] = pairs[k].score;
    labels[k] = pairs[k].label;
  }
  return auc(scores, labels);
}

}  // namespace cssl
