#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cssl/graph.hpp"

namespace cssl {

struct ScoredPair {
  Edge edge;
  double score = 0.0;
  std::uint8_t label = 0;
};

// Area under the ROC curve: the probability that a random positive outscores
// a random negative, ties credited one half. Rank-sum, O(P log P). Throws
// std::invalid_argument unless both classes are present or a score is
// non-finite.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);
double auc(std::span<const ScoredPair> pairs);

}  // namespace cssl
