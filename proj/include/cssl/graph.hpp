#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cssl {

using NodeId = std::uint32_t;

// Undirected edge. Canonical form has u < v; see make_edge.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct AttrEntry {
  std::uint32_t index = 0;
  double value = 0.0;
  friend bool operator==(const AttrEntry&, const AttrEntry&) = default;
};

// Sparse node-attribute matrix in compressed rows. Entries within a row are
// sorted by index and unique.
class AttributeRows {
 public:
  AttributeRows() : offsets_{0} {}

  // Validates and sorts each row. Zero values are dropped.
  static AttributeRows from_rows(std::vector<std::vector<AttrEntry>> rows, std::size_t dim);

  std::size_t num_rows() const { return offsets_.size() - 1; }
  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  std::span<const AttrEntry> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  bool empty() const { return num_rows() == 0 || dim_ == 0; }

  friend bool operator==(const AttributeRows&, const AttributeRows&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<AttrEntry> entries_;
  std::size_t dim_ = 0;
};

struct BuildStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges = 0;
};

// Simple undirected graph over dense node ids with per-node sparse
// attributes. Immutable after construction.
class AttributedGraph {
 public:
  AttributedGraph() : offsets_{0} {}

  // Symmetrizes `edges`, drops self-loops and duplicates. `attrs` must either
  // be empty or have one row per node. `tokens`, when non-empty, names each
  // node for I/O.
  static AttributedGraph build(std::size_t num_nodes, std::span<const Edge> edges,
                               AttributeRows attrs = {}, std::vector<std::string> tokens = {},
                               BuildStats* stats = nullptr);

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }
  std::size_t attr_dim() const { return attrs_.dim(); }
  bool has_attributes() const { return !attrs_.empty(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId a, NodeId b) const;

  std::span<const AttrEntry> attributes(NodeId v) const {
    return attrs_.num_rows() == 0 ? std::span<const AttrEntry>{} : attrs_.row(v);
  }
  const AttributeRows& attribute_rows() const { return attrs_; }

  // Canonical (u < v) edge list, sorted.
  std::vector<Edge> edges() const;

  std::string token(NodeId v) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Same node set and attributes, different edge set.
  AttributedGraph with_edges(std::span<const Edge> edges) const;
  AttributedGraph with_attributes(AttributeRows attrs) const;

  // Mean number of nonzero attributes per node.
  double mean_nnz() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  AttributeRows attrs_;
  std::vector<std::string> tokens_;
};

// Attributes replaced by node identity: row i is the single entry (i, 1.0).
AttributedGraph one_hot_attrs(const AttributedGraph& g);

// For every node, floor(ratio * m) attribute positions are chosen uniformly
// without replacement and flipped 0 <-> 1. Attributes must be binary.
AttributedGraph flip_attributes(const AttributedGraph& g, double ratio, std::uint64_t seed);

// Stable 64-bit fingerprint of nodes, tokens, edges and attributes.
std::uint64_t graph_hash(const AttributedGraph& g);
std::string hash_hex(std::uint64_t h);

}  // namespace cssl
