#include "cssl/heuristics.hpp"

#include <cmath>

#include "cssl/errors.hpp"

namespace cssl {

std::string to_string(Heuristic h) {
  switch (h) {
    case Heuristic::common_neighbors: return "cn";
    case Heuristic::jaccard: return "jaccard";
    case Heuristic::adamic_adar: return "aa";
    case Heuristic::preferential_attachment: return "pa";
  }
  return "?";
}

Heuristic parse_heuristic(const std::string& s) {
  if (s == "cn") return Heuristic::common_neighbors;
  if (s == "jaccard") return Heuristic::jaccard;
  if (s == "aa") return Heuristic::adamic_adar;
  if (s == "pa") return Heuristic::preferential_attachment;
  throw ConfigError("unknown heuristic '" + s + "'");
}

double heuristic_score(const AttributedGraph& g, Heuristic kind, Edge pair) {
  if (pair.u >= g.num_nodes() || pair.v >= g.num_nodes()) throw ValidationError("heuristic: node out of range");
  const auto a = g.neighbors(pair.u);
  const auto b = g.neighbors(pair.v);
  if (kind == Heuristic::preferential_attachment)
    return static_cast<double>(a.size()) * static_cast<double>(b.size());

  // Merge of the two sorted neighbor lists.
  std::size_t common = 0;
  double aa = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      aa += 1.0 / std::log(static_cast<double>(g.degree(a[i])));
      ++i;
      ++j;
    }
  }
  switch (kind) {
    case Heuristic::common_neighbors: return static_cast<double>(common);
    case Heuristic::jaccard: {
      const std::size_t uni = a.size() + b.size() - common;
      return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
    }
    case Heuristic::adamic_adar: return aa;
    default: return 0.0;
  }
}

std::vector<double> heuristic_scores(const AttributedGraph& g, Heuristic kind, std::span<const Edge> pairs) {
  std::vector<double> out(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
  for (const auto& p : pairs)
    if (p.u >= g.num_nodes() || p.v >= g.num_nodes()) throw ValidationError("heuristic: node out of range");
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t k = 0; k < n; ++k) out[k] = heuristic_score(g, kind, pairs[k]);
  return out;
}

std::vector<double> heuristic_scores_serial(const AttributedGraph& g, Heuristic kind,
                                            std::span<const Edge> pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) out[k] = heuristic_score(g, kind, pairs[k]);
  return out;
}

}  // namespace cssl
