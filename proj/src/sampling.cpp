#include "cssl/sampling.hpp"

#include <algorithm>
#include <exception>

#include "cssl/errors.hpp"

namespace cssl {

std::string to_string(ContextKind kind) { return kind == ContextKind::node ? "node" : "subgraph"; }

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw ConfigError("walks per node must be >= 1");
  if (walk_length < 2) throw ConfigError("walk length must be >= 2");
  if (negatives_per_positive < 1) throw ConfigError("negatives per positive must be >= 1");
}

std::vector<NodeId> random_walk(const AttributedGraph& g, NodeId start, std::size_t length, Rng& rng) {
  std::vector<NodeId> walk;
  if (length == 0) return walk;
  walk.reserve(length);
  walk.push_back(start);
  NodeId cur = start;
  while (walk.size() < length) {
    const auto nb = g.neighbors(cur);
    if (nb.empty()) break;
    cur = nb[rng.uniform(nb.size())];
    walk.push_back(cur);
  }
  return walk;
}

std::vector<NodeId> sample_negative_context(NodeId anchor, std::span<const NodeId> positives,
                                            std::size_t num_nodes, std::size_t size, Rng& rng) {
  const bool anchor_positive = std::binary_search(positives.begin(), positives.end(), anchor);
  const std::size_t blocked = positives.size() + (anchor_positive ? 0 : 1);
  if (num_nodes <= blocked)
    throw SamplingError("no negative context candidate for node " + std::to_string(anchor));

  const auto rejected = [&](NodeId u) {
    return u == anchor || std::binary_search(positives.begin(), positives.end(), u);
  };
  std::vector<NodeId> out;
  out.reserve(size);
  std::vector<NodeId> candidates;  // filled only if rejection stalls
  for (std::size_t s = 0; s < size; ++s) {
    if (candidates.empty()) {
      bool found = false;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const auto u = static_cast<NodeId>(rng.uniform(num_nodes));
        if (!rejected(u)) {
          out.push_back(u);
          found = true;
          break;
        }
      }
      if (found) continue;
      for (NodeId u = 0; u < num_nodes; ++u)
        if (!rejected(u)) candidates.push_back(u);
    }
    out.push_back(candidates[rng.uniform(candidates.size())]);
  }
  return out;
}

ContextSample ContextStore::at(NodeId v, std::size_t i) const {
  const auto& ref = samples_[node_offsets_[v] + i];
  return {v, std::span<const NodeId>(members_.data() + ref.offset, ref.size),
          static_cast<std::uint8_t>(ref.label)};
}

std::optional<ContextSample> ContextStore::next_context(NodeId v) {
  const std::size_t n = size(v);
  if (n == 0) return std::nullopt;
  if (cursor_[v] == n) {
    Rng rng(derive_seed(seed_, "context/reshuffle", (std::uint64_t{v} << 32) | ++pass_[v]));
    rng.shuffle(std::span<SampleRef>(samples_.data() + node_offsets_[v], n));
    cursor_[v] = 0;
  }
  return at(v, cursor_[v]++);
}

ContextStore::NodeLists ContextStore::build_node(const AttributedGraph& g, const WalkConfig& cfg,
                                                 std::uint64_t seed, NodeId v, bool keep_walks) {
  NodeLists out;
  if (g.degree(v) == 0) return out;
  Rng rng(derive_seed(seed, "context", v));
  const std::size_t k = cfg.negatives_per_positive;

  std::vector<std::vector<NodeId>> walks;
  walks.reserve(cfg.walks_per_node);
  for (std::size_t w = 0; w < cfg.walks_per_node; ++w)
    walks.push_back(random_walk(g, v, cfg.walk_length, rng));

  std::vector<NodeId> positives;
  for (const auto& walk : walks) positives.insert(positives.end(), walk.begin() + 1, walk.end());
  std::vector<NodeId> positive_set = positives;
  std::sort(positive_set.begin(), positive_set.end());
  positive_set.erase(std::unique(positive_set.begin(), positive_set.end()), positive_set.end());

  auto push = [&out](std::span<const NodeId> members, std::uint32_t label) {
    out.samples.push_back({out.members.size(), static_cast<std::uint32_t>(members.size()), label});
    out.members.insert(out.members.end(), members.begin(), members.end());
  };

  if (cfg.kind == ContextKind::node) {
    for (NodeId p : positives) push(std::span<const NodeId>(&p, 1), 1);
    for (std::size_t i = 0; i < positives.size() * k; ++i)
      push(sample_negative_context(v, positive_set, g.num_nodes(), 1, rng), 0);
  } else {
    for (const auto& walk : walks) push(std::span<const NodeId>(walk).subspan(1), 1);
    for (const auto& walk : walks)
      for (std::size_t i = 0; i < k; ++i)
        push(sample_negative_context(v, positive_set, g.num_nodes(), walk.size() - 1, rng), 0);
  }
  rng.shuffle(std::span<SampleRef>(out.samples));
  if (keep_walks) out.walks = std::move(walks);
  return out;
}

ContextStore ContextStore::assemble(ContextKind kind, std::uint64_t seed, std::vector<NodeLists>& lists,
                                    bool parallel) {
  ContextStore store;
  store.kind_ = kind;
  store.seed_ = seed;
  const std::size_t n = lists.size();
  store.node_offsets_.assign(n + 1, 0);
  std::vector<std::size_t> member_offsets(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    store.node_offsets_[v + 1] = store.node_offsets_[v] + lists[v].samples.size();
    member_offsets[v + 1] = member_offsets[v] + lists[v].members.size();
  }
  store.samples_.resize(store.node_offsets_[n]);
  store.members_.resize(member_offsets[n]);
  const auto ln = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < ln; ++i) {
    const auto v = static_cast<std::size_t>(i);
    auto& l = lists[v];
    for (std::size_t s = 0; s < l.samples.size(); ++s) {
      auto ref = l.samples[s];
      ref.offset += member_offsets[v];
      store.samples_[store.node_offsets_[v] + s] = ref;
    }
    std::copy(l.members.begin(), l.members.end(),
              store.members_.begin() + static_cast<std::ptrdiff_t>(member_offsets[v]));
  }
  store.cursor_.assign(n, 0);
  store.pass_.assign(n, 0);
  return store;
}

namespace {

void collect_walks(std::vector<ContextStore::NodeLists>& lists,
                   std::vector<std::vector<NodeId>>* walks_out) {
  if (!walks_out) return;
  walks_out->clear();
  for (auto& l : lists)
    for (auto& w : l.walks) walks_out->push_back(std::move(w));
}

}  // namespace

ContextStore build_context_store(const AttributedGraph& g, const WalkConfig& cfg, std::uint64_t seed,
                                 std::vector<std::vector<NodeId>>* walks_out) {
  cfg.validate();
  const auto n = static_cast<std::int64_t>(g.num_nodes());
  std::vector<ContextStore::NodeLists> lists(g.num_nodes());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t v = 0; v < n; ++v) {
    try {
      lists[v] = ContextStore::build_node(g, cfg, seed, static_cast<NodeId>(v), walks_out != nullptr);
    } catch (...) {
#pragma omp critical(cssl_context_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  collect_walks(lists, walks_out);
  return ContextStore::assemble(cfg.kind, seed, lists, true);
}

ContextStore build_context_store_serial(const AttributedGraph& g, const WalkConfig& cfg,
                                        std::uint64_t seed,
                                        std::vector<std::vector<NodeId>>* walks_out) {
  cfg.validate();
  std::vector<ContextStore::NodeLists> lists(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    lists[v] = ContextStore::build_node(g, cfg, seed, v, walks_out != nullptr);
  collect_walks(lists, walks_out);
  return ContextStore::assemble(cfg.kind, seed, lists, false);
}

std::vector<LabeledEdge> label_edges(std::span<const Edge> positives, std::span<const Edge> negatives) {
  std::vector<LabeledEdge> out;
  out.reserve(positives.size() + negatives.size());
  for (const auto& e : positives) out.push_back({e, 1});
  for (const auto& e : negatives) out.push_back({e, 0});
  return out;
}

std::vector<std::span<const LabeledEdge>> epoch_batches(std::span<LabeledEdge> edges,
                                                        std::size_t batch_size, Rng& rng) {
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  rng.shuffle(edges);
  std::vector<std::span<const LabeledEdge>> out;
  out.reserve(edges.size() / batch_size + 1);
  for (std::size_t i = 0; i < edges.size(); i += batch_size)
    out.push_back(edges.subspan(i, std::min(batch_size, edges.size() - i)));
  return out;
}

}  // namespace cssl
