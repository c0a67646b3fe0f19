#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cssl/graph.hpp"
#include "cssl/rng.hpp"

namespace cssl {

enum class ContextKind { node, subgraph };

std::string to_string(ContextKind kind);

struct WalkConfig {
  std::size_t walks_per_node = 10;        // gamma
  std::size_t walk_length = 5;            // l, counts the start node
  std::size_t negatives_per_positive = 1;  // k
  ContextKind kind = ContextKind::node;

  void validate() const;
};

// One labeled structural context of an anchor node. `members` holds a single
// node for node contexts and the l-1 walk followers (a multiset) for
// subgraph contexts.
struct ContextSample {
  NodeId anchor = 0;
  std::span<const NodeId> members;
  std::uint8_t label = 0;
};

// Walk starting at `start`; each step moves to a uniformly random neighbor.
// Stops early at a node without neighbors.
std::vector<NodeId> random_walk(const AttributedGraph& g, NodeId start, std::size_t length, Rng& rng);

// Uniform draw of `size` nodes, each differing from `anchor` and absent from
// `positives` (sorted). Throws SamplingError when no candidate exists.
std::vector<NodeId> sample_negative_context(NodeId anchor, std::span<const NodeId> positives,
                                            std::size_t num_nodes, std::size_t size, Rng& rng);

// Per-node lists of positive and negative contexts, materialized once and
// consumed cyclically through next_context.
class ContextStore {
 public:
  ContextStore() = default;

  ContextKind kind() const { return kind_; }
  std::size_t num_nodes() const { return node_offsets_.empty() ? 0 : node_offsets_.size() - 1; }
  std::size_t size(NodeId v) const { return node_offsets_[v + 1] - node_offsets_[v]; }
  std::size_t total_size() const { return samples_.size(); }
  ContextSample at(NodeId v, std::size_t i) const;

  // Next sample of v's list. Reshuffles the list after each full pass.
  // Empty for nodes without neighbors.
  std::optional<ContextSample> next_context(NodeId v);

  friend bool operator==(const ContextStore& a, const ContextStore& b) {
    return a.kind_ == b.kind_ && a.node_offsets_ == b.node_offsets_ && a.samples_ == b.samples_ &&
           a.members_ == b.members_;
  }

  struct SampleRef {
    std::uint64_t offset = 0;  // into members_
    std::uint32_t size = 0;
    std::uint32_t label = 0;
    friend bool operator==(const SampleRef&, const SampleRef&) = default;
  };

  // Per-node build result, assembled into a store by the builders.
  struct NodeLists {
    std::vector<SampleRef> samples;
    std::vector<NodeId> members;
    std::vector<std::vector<NodeId>> walks;
  };

  static NodeLists build_node(const AttributedGraph& g, const WalkConfig& cfg, std::uint64_t seed,
                              NodeId v, bool keep_walks);
  static ContextStore assemble(ContextKind kind, std::uint64_t seed, std::vector<NodeLists>& lists,
                               bool parallel);

 private:
  ContextKind kind_ = ContextKind::node;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> node_offsets_;
  std::vector<SampleRef> samples_;
  std::vector<NodeId> members_;
  std::vector<std::size_t> cursor_;
  std::vector<std::uint32_t> pass_;
};

// Walks of every node, node by node, from substreams keyed by (seed, node).
// The OpenMP build and the serial reference produce identical stores.
ContextStore build_context_store(const AttributedGraph& g, const WalkConfig& cfg, std::uint64_t seed,
                                 std::vector<std::vector<NodeId>>* walks_out = nullptr);
ContextStore build_context_store_serial(const AttributedGraph& g, const WalkConfig& cfg,
                                        std::uint64_t seed,
                                        std::vector<std::vector<NodeId>>* walks_out = nullptr);

struct LabeledEdge {
  Edge edge;
  std::uint8_t label = 0;
  friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
};

std::vector<LabeledEdge> label_edges(std::span<const Edge> positives, std::span<const Edge> negatives);

// Shuffles `edges` in place and slices it into consecutive batches of
// `batch_size`; the last batch may be short.
std::vector<std::span<const LabeledEdge>> epoch_batches(std::span<LabeledEdge> edges,
                                                        std::size_t batch_size, Rng& rng);

}  // namespace cssl
