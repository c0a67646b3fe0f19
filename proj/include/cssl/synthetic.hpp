#pragma once

#include <cstdint>

#include "cssl/graph.hpp"

namespace cssl {

// Uniform random simple graph with exactly `num_edges` edges and
// `nnz_per_node` random binary attributes per node.
AttributedGraph erdos_renyi_attributed(std::size_t num_nodes, std::size_t num_edges, std::size_t attr_dim,
                                       std::size_t nnz_per_node, std::uint64_t seed);

struct SbmConfig {
  std::size_t num_nodes = 600;
  std::size_t blocks = 2;
  double p_in = 0.03;
  double p_out = 0.002;
  std::size_t attr_dim = 200;
  std::size_t nnz_per_node = 12;
  // Probability that an attribute is drawn from the node's block vocabulary
  // (the first attr_dim / blocks indices belong to block 0, and so on)
  // rather than uniformly from all attributes.
  double attr_signal = 0.8;
};

// Stochastic block model with block-correlated binary attributes.
AttributedGraph attributed_sbm(const SbmConfig& cfg, std::uint64_t seed);

}  // namespace cssl
