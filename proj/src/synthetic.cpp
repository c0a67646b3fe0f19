#include "cssl/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "cssl/errors.hpp"
#include "cssl/rng.hpp"
#include "cssl/split.hpp"

namespace cssl {

namespace {

std::vector<AttrEntry> random_row(std::size_t dim, std::size_t nnz, Rng& rng,
                                  const std::function<std::uint32_t(Rng&)>& draw) {
  std::vector<AttrEntry> row;
  std::unordered_set<std::uint32_t> seen;
  nnz = std::min(nnz, dim);
  while (row.size() < nnz) {
    const auto idx = draw(rng);
    if (seen.insert(idx).second) row.push_back({idx, 1.0});
  }
  return row;
}

}  // namespace

AttributedGraph erdos_renyi_attributed(std::size_t num_nodes, std::size_t num_edges, std::size_t attr_dim,
                                       std::size_t nnz_per_node, std::uint64_t seed) {
  if (num_nodes < 2 || attr_dim == 0) throw ConfigError("synthetic graph needs >= 2 nodes and attributes");
  const double max_edges = 0.5 * static_cast<double>(num_nodes) * static_cast<double>(num_nodes - 1);
  if (static_cast<double>(num_edges) > 0.5 * max_edges) throw ConfigError("synthetic graph too dense");
  Rng rng(derive_seed(seed, "synthetic/er"));
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(num_edges * 2);
  std::vector<Edge> edges;
  edges.reserve(num_edges);
  while (edges.size() < num_edges) {
    const auto a = static_cast<NodeId>(rng.uniform(num_nodes));
    const auto b = static_cast<NodeId>(rng.uniform(num_nodes));
    if (a == b) continue;
    const Edge e = make_edge(a, b);
    if (taken.insert(pack_edge(e)).second) edges.push_back(e);
  }
  std::vector<std::vector<AttrEntry>> rows(num_nodes);
  const auto uniform_attr = [attr_dim](Rng& r) { return static_cast<std::uint32_t>(r.uniform(attr_dim)); };
  for (auto& row : rows) row = random_row(attr_dim, nnz_per_node, rng, uniform_attr);
  return AttributedGraph::build(num_nodes, edges, AttributeRows::from_rows(std::move(rows), attr_dim));
}

AttributedGraph attributed_sbm(const SbmConfig& cfg, std::uint64_t seed) {
  if (cfg.blocks == 0 || cfg.num_nodes < cfg.blocks || cfg.attr_dim < cfg.blocks)
    throw ConfigError("invalid SBM configuration");
  if (cfg.attr_signal >= 1.0 && cfg.attr_dim / cfg.blocks < cfg.nnz_per_node)
    throw ConfigError("SBM block vocabulary smaller than nnz_per_node");
  Rng rng(derive_seed(seed, "synthetic/sbm"));
  const std::size_t n = cfg.num_nodes;
  std::vector<std::size_t> block(n);
  for (std::size_t v = 0; v < n; ++v) block[v] = v * cfg.blocks / n;

  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (rng.uniform01() < (block[a] == block[b] ? cfg.p_in : cfg.p_out)) edges.push_back({a, b});

  const std::size_t vocab = cfg.attr_dim / cfg.blocks;
  std::vector<std::vector<AttrEntry>> rows(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t base = block[v] * vocab;
    rows[v] = random_row(cfg.attr_dim, cfg.nnz_per_node, rng, [&](Rng& r) {
      if (r.uniform01() < cfg.attr_signal) return static_cast<std::uint32_t>(base + r.uniform(vocab));
      return static_cast<std::uint32_t>(r.uniform(cfg.attr_dim));
    });
  }
  return AttributedGraph::build(n, edges, AttributeRows::from_rows(std::move(rows), cfg.attr_dim));
}

}  // namespace cssl
