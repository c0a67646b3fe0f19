#include "cssl/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "cssl/errors.hpp"
#include "cssl/rng.hpp"

namespace cssl {

AttributeRows AttributeRows::from_rows(std::vector<std::vector<AttrEntry>> rows, std::size_t dim) {
  AttributeRows out;
  out.dim_ = dim;
  out.offsets_.clear();
  out.offsets_.reserve(rows.size() + 1);
  out.offsets_.push_back(0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end(),
              [](const AttrEntry& a, const AttrEntry& b) { return a.index < b.index; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& e = row[k];
      if (e.index >= dim)
        throw ValidationError("node " + std::to_string(r) + ": attribute index " +
                              std::to_string(e.index) + " >= dimension " + std::to_string(dim));
      if (!std::isfinite(e.value))
        throw ValidationError("node " + std::to_string(r) + ": non-finite attribute value");
      if (k > 0 && row[k - 1].index == e.index)
        throw ValidationError("node " + std::to_string(r) + ": duplicate attribute index " +
                              std::to_string(e.index));
      if (e.value != 0.0) out.entries_.push_back(e);
    }
    out.offsets_.push_back(out.entries_.size());
  }
  return out;
}

AttributedGraph AttributedGraph::build(std::size_t num_nodes, std::span<const Edge> edges,
                                       AttributeRows attrs, std::vector<std::string> tokens,
                                       BuildStats* stats) {
  if (!attrs.empty() && attrs.num_rows() != num_nodes)
    throw ValidationError("attribute rows (" + std::to_string(attrs.num_rows()) +
                          ") do not match node count (" + std::to_string(num_nodes) + ")");
  if (!tokens.empty() && tokens.size() != num_nodes)
    throw ValidationError("token count does not match node count");

  BuildStats local;
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes)
      throw ValidationError("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + ")");
    if (e.u == e.v) {
      ++local.self_loops_dropped;
      continue;
    }
    canon.push_back(make_edge(e.u, e.v));
  }
  std::sort(canon.begin(), canon.end());
  const auto last = std::unique(canon.begin(), canon.end());
  local.duplicate_edges = static_cast<std::size_t>(canon.end() - last);
  canon.erase(last, canon.end());

  AttributedGraph g;
  g.offsets_.assign(num_nodes + 1, 0);
  for (const auto& e : canon) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(2 * canon.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : canon) {
    g.neighbors_[fill[e.u]++] = e.v;
    g.neighbors_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < num_nodes; ++i)
    std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));

  g.attrs_ = std::move(attrs);
  g.tokens_ = std::move(tokens);
  if (stats) *stats = local;
  return g;
}

bool AttributedGraph::has_edge(NodeId a, NodeId b) const {
  if (degree(a) > degree(b)) std::swap(a, b);
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<Edge> AttributedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

std::string AttributedGraph::token(NodeId v) const {
  return tokens_.empty() ? std::to_string(v) : tokens_[v];
}

AttributedGraph AttributedGraph::with_edges(std::span<const Edge> edges) const {
  return build(num_nodes(), edges, attrs_, tokens_);
}

AttributedGraph AttributedGraph::with_attributes(AttributeRows attrs) const {
  AttributedGraph g = *this;
  if (!attrs.empty() && attrs.num_rows() != num_nodes())
    throw ValidationError("attribute rows do not match node count");
  g.attrs_ = std::move(attrs);
  return g;
}

double AttributedGraph::mean_nnz() const {
  return num_nodes() == 0 ? 0.0
                          : static_cast<double>(attrs_.nnz()) / static_cast<double>(num_nodes());
}

AttributedGraph one_hot_attrs(const AttributedGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<AttrEntry>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = {{static_cast<std::uint32_t>(i), 1.0}};
  return g.with_attributes(AttributeRows::from_rows(std::move(rows), n));
}

namespace {

// Floyd's algorithm: k distinct values from [0, m), sorted.
std::vector<std::uint32_t> sample_without_replacement(std::size_t m, std::size_t k, Rng& rng) {
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k * 2);
  for (std::size_t j = m - k; j < m; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.uniform(j + 1));
    if (!chosen.insert(t).second) chosen.insert(static_cast<std::uint32_t>(j));
  }
  std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

AttributedGraph flip_attributes(const AttributedGraph& g, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ConfigError("flip ratio must lie in [0, 1]");
  const std::size_t m = g.attr_dim();
  const std::size_t n = g.num_nodes();
  for (NodeId v = 0; v < n; ++v)
    for (const auto& e : g.attributes(v))
      if (e.value != 1.0)
        throw ValidationError("flip_attributes requires binary attributes; node " +
                              g.token(v) + " has value " + std::to_string(e.value));
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const auto flips = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(m) + 1e-9));
  if (flips == 0) return g;

  std::vector<std::vector<AttrEntry>> rows(n);
  for (NodeId v = 0; v < n; ++v) {
    Rng rng(derive_seed(seed, "flip", v));
    const auto positions = sample_without_replacement(m, flips, rng);
    const auto row = g.attributes(v);
    auto& out = rows[v];
    // Symmetric difference of the current support and the flip positions.
    std::size_t a = 0, b = 0;
    while (a < row.size() || b < positions.size()) {
      if (b == positions.size() || (a < row.size() && row[a].index < positions[b])) {
        out.push_back(row[a++]);
      } else if (a == row.size() || positions[b] < row[a].index) {
        out.push_back({positions[b++], 1.0});
      } else {
        ++a;
        ++b;
      }
    }
  }
  return g.with_attributes(AttributeRows::from_rows(std::move(rows), m));
}

std::uint64_t graph_hash(const AttributedGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t x) { h = mix64(h ^ x); };
  feed(g.num_nodes());
  feed(g.attr_dim());
  for (const auto& t : g.tokens()) feed(fnv1a(t));
  for (const auto& e : g.edges()) feed((static_cast<std::uint64_t>(e.u) << 32) | e.v);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    feed(0xa11ce);
    for (const auto& a : g.attributes(v)) {
      feed(a.index);
      feed(std::bit_cast<std::uint64_t>(a.value));
    }
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cssl
