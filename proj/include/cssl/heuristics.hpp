#pragma once

#include <span>
#include <string>
#include <vector>

#include "cssl/graph.hpp"

namespace cssl {

enum class Heuristic { common_neighbors, jaccard, adamic_adar, preferential_attachment };

std::string to_string(Heuristic h);  // "cn", "jaccard", "aa", "pa"
Heuristic parse_heuristic(const std::string& s);

// Neighborhood score of a pair on the given (training) graph:
//   CN  |N(i) & N(j)|
//   JC  |N(i) & N(j)| / |N(i) | N(j)|, 0 when both are empty
//   AA  sum over common neighbors k of 1 / log |N(k)|
//   PA  |N(i)| * |N(j)|
double heuristic_score(const AttributedGraph& g, Heuristic kind, Edge pair);

std::vector<double> heuristic_scores(const AttributedGraph& g, Heuristic kind, std::span<const Edge> pairs);
std::vector<double> heuristic_scores_serial(const AttributedGraph& g, Heuristic kind,
                                            std::span<const Edge> pairs);

}  // namespace cssl
