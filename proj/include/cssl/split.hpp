#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cssl/graph.hpp"
#include "cssl/rng.hpp"

namespace cssl {

enum class SplitKind { transductive, inductive };

std::string to_string(SplitKind kind);
SplitKind parse_split_kind(const std::string& s);

struct SplitRatios {
  double train = 0.45;
  double val = 0.05;
  double test = 0.50;
  friend bool operator==(const SplitRatios&, const SplitRatios&) = default;
};

// Positive edges partitioned three ways, each with an equally sized set of
// sampled non-edges. Training negatives avoid only the training edges;
// validation and test negatives avoid every edge of the full graph.
struct DataSplit {
  SplitKind kind = SplitKind::transductive;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  double holdout_fraction = 0.0;
  double observed_link_fraction = 0.0;
  std::uint64_t graph_hash = 0;
  std::size_t num_nodes = 0;

  std::vector<Edge> train_pos, val_pos, test_pos;
  std::vector<Edge> train_neg, val_neg, test_neg;
  std::vector<NodeId> out_of_sample_nodes;  // inductive only, sorted

  friend bool operator==(const DataSplit&, const DataSplit&) = default;
};

// The part of an inductive split a model may see during training, with
// node ids renumbered densely. Held-out attribute rows are kept aside for
// scoring.
struct InductiveView {
  AttributedGraph in_sample_graph;
  std::vector<NodeId> local_to_global;
  std::vector<NodeId> held_out;  // global ids, sorted
  AttributeRows held_out_attrs;  // one row per entry of `held_out`
  DataSplit training_split;      // train/val sets in local ids; test sets empty

  // Attribute row of a global node id, from whichever side holds it.
  std::span<const AttrEntry> attributes_of(NodeId global) const;
  std::optional<NodeId> to_local(NodeId global) const;

  static constexpr NodeId kInvalid = ~NodeId{0};
  std::vector<NodeId> global_to_local;  // kInvalid for nodes unseen in training
};

inline std::uint64_t pack_edge(const Edge& e) {
  return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

// Draws `count` distinct node pairs (u != v) proposed by `propose` and not
// rejected by `excluded` or already in `taken` (packed with pack_edge).
// Accepted pairs are added to `taken`. Throws SamplingError after
// 100 * count rejections.
std::vector<Edge> sample_negative_edges(std::size_t count,
                                        const std::function<Edge(Rng&)>& propose,
                                        const std::function<bool(const Edge&)>& excluded,
                                        std::unordered_set<std::uint64_t>& taken, Rng& rng);

DataSplit split_links(const AttributedGraph& g, SplitRatios ratios, std::uint64_t seed);

struct InductiveSplit {
  InductiveView view;
  DataSplit split;
};

// Holds out a random node fraction. With observed_link_fraction > 0, that
// share of the held-out nodes' links is moved into training. `val_fraction`
// of the in-sample links is reserved for epoch selection.
InductiveSplit split_inductive(const AttributedGraph& g, double holdout_fraction,
                               double observed_link_fraction, std::uint64_t seed,
                               double val_fraction = 0.1);

// Rebuilds the training-side view of an inductive split.
InductiveView make_inductive_view(const AttributedGraph& g, const DataSplit& split);

// Graph over all nodes of `g` restricted to the split's training edges.
AttributedGraph training_graph(const AttributedGraph& g, const DataSplit& split);

}  // namespace cssl
