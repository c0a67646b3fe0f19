#include "cssl/split.hpp"

#include <algorithm>
#include <cmath>

#include "cssl/errors.hpp"

namespace cssl {

std::string to_string(SplitKind kind) {
  return kind == SplitKind::transductive ? "transductive" : "inductive";
}

SplitKind parse_split_kind(const std::string& s) {
  if (s == "transductive") return SplitKind::transductive;
  if (s == "inductive") return SplitKind::inductive;
  throw ConfigError("unknown split kind '" + s + "'");
}

std::span<const AttrEntry> InductiveView::attributes_of(NodeId global) const {
  if (auto local = to_local(global)) return in_sample_graph.attributes(*local);
  const auto it = std::lower_bound(held_out.begin(), held_out.end(), global);
  if (it == held_out.end() || *it != global)
    throw ValidationError("no attribute row for node " + std::to_string(global));
  return held_out_attrs.row(static_cast<std::size_t>(it - held_out.begin()));
}

std::optional<NodeId> InductiveView::to_local(NodeId global) const {
  if (global >= global_to_local.size() || global_to_local[global] == kInvalid) return std::nullopt;
  return global_to_local[global];
}

std::vector<Edge> sample_negative_edges(std::size_t count,
                                        const std::function<Edge(Rng&)>& propose,
                                        const std::function<bool(const Edge&)>& excluded,
                                        std::unordered_set<std::uint64_t>& taken, Rng& rng) {
  std::vector<Edge> out;
  out.reserve(count);
  const std::size_t max_rejections = 100 * std::max<std::size_t>(count, 1);
  std::size_t rejections = 0;
  while (out.size() < count) {
    const Edge e = propose(rng);
    if (e.u == e.v || excluded(e) || taken.count(pack_edge(e))) {
      if (++rejections > max_rejections)
        throw SamplingError("negative edge sampling exceeded " + std::to_string(max_rejections) +
                            " rejections (" + std::to_string(out.size()) + " of " +
                            std::to_string(count) + " drawn); graph too dense?");
      continue;
    }
    taken.insert(pack_edge(e));
    out.push_back(e);
  }
  return out;
}

namespace {

std::unordered_set<std::uint64_t> edge_set(std::span<const Edge> edges) {
  std::unordered_set<std::uint64_t> s;
  s.reserve(edges.size() * 2);
  for (const auto& e : edges) s.insert(pack_edge(e));
  return s;
}

auto uniform_pair_over(std::span<const NodeId> nodes) {
  return [nodes](Rng& rng) {
    const NodeId a = nodes[rng.uniform(nodes.size())];
    const NodeId b = nodes[rng.uniform(nodes.size())];
    return make_edge(a, b);
  };
}

void check_ratios(const SplitRatios& r) {
  if (!(r.train > 0 && r.val > 0 && r.test > 0))
    throw ConfigError("split ratios must all be positive");
  if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
}

}  // namespace

DataSplit split_links(const AttributedGraph& g, SplitRatios ratios, std::uint64_t seed) {
  check_ratios(ratios);
  auto edges = g.edges();
  const std::size_t total = edges.size();
  // Train and test sizes round half to even; validation takes the remainder.
  const auto n_train = static_cast<std::size_t>(std::nearbyint(ratios.train * static_cast<double>(total)));
  const auto n_test = static_cast<std::size_t>(std::nearbyint(ratios.test * static_cast<double>(total)));
  if (n_train == 0 || n_test == 0 || n_train + n_test >= total)
    throw ConfigError("split of " + std::to_string(total) + " edges leaves an empty set");

  Rng shuffle_rng(derive_seed(seed, "split/edges"));
  shuffle_rng.shuffle(std::span<Edge>(edges));

  DataSplit s;
  s.kind = SplitKind::transductive;
  s.seed = seed;
  s.ratios = ratios;
  s.graph_hash = graph_hash(g);
  s.num_nodes = g.num_nodes();
  s.train_pos.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val_pos.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_train),
                   edges.end() - static_cast<std::ptrdiff_t>(n_test));
  s.test_pos.assign(edges.end() - static_cast<std::ptrdiff_t>(n_test), edges.end());

  std::vector<NodeId> all(g.num_nodes());
  for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
  const auto propose = uniform_pair_over(all);

  const auto train_set = edge_set(s.train_pos);
  std::unordered_set<std::uint64_t> taken;
  Rng train_rng(derive_seed(seed, "split/train_neg"));
  s.train_neg = sample_negative_edges(
      s.train_pos.size(), propose, [&](const Edge& e) { return train_set.count(pack_edge(e)) > 0; },
      taken, train_rng);

  // Validation and test negatives are disjoint from each other.
  taken.clear();
  const auto not_observed = [&](const Edge& e) { return g.has_edge(e.u, e.v); };
  Rng val_rng(derive_seed(seed, "split/val_neg"));
  s.val_neg = sample_negative_edges(s.val_pos.size(), propose, not_observed, taken, val_rng);
  Rng test_rng(derive_seed(seed, "split/test_neg"));
  s.test_neg = sample_negative_edges(s.test_pos.size(), propose, not_observed, taken, test_rng);
  return s;
}

InductiveSplit split_inductive(const AttributedGraph& g, double holdout_fraction,
                               double observed_link_fraction, std::uint64_t seed,
                               double val_fraction) {
  if (!(holdout_fraction > 0 && holdout_fraction < 1))
    throw ConfigError("holdout fraction must lie in (0, 1)");
  if (!(observed_link_fraction >= 0 && observed_link_fraction < 1))
    throw ConfigError("observed link fraction must lie in [0, 1)");
  if (!(val_fraction > 0 && val_fraction < 1)) throw ConfigError("val fraction must lie in (0, 1)");

  const std::size_t n = g.num_nodes();
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  Rng node_rng(derive_seed(seed, "inductive/nodes"));
  node_rng.shuffle(std::span<NodeId>(order));
  const auto n_hold = static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(n)));
  if (n_hold == 0) throw ConfigError("holdout fraction selects no nodes");

  std::vector<char> is_held(n, 0);
  std::vector<NodeId> held(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_hold));
  std::sort(held.begin(), held.end());
  for (NodeId v : held) is_held[v] = 1;

  std::vector<Edge> in_sample, out_of_sample;
  for (const auto& e : g.edges()) (is_held[e.u] || is_held[e.v] ? out_of_sample : in_sample).push_back(e);

  Rng edge_rng(derive_seed(seed, "inductive/edges"));
  edge_rng.shuffle(std::span<Edge>(in_sample));
  edge_rng.shuffle(std::span<Edge>(out_of_sample));
  const auto n_val = static_cast<std::size_t>(std::floor(val_fraction * static_cast<double>(in_sample.size())));
  const auto n_obs =
      static_cast<std::size_t>(std::floor(observed_link_fraction * static_cast<double>(out_of_sample.size())));

  DataSplit s;
  s.kind = SplitKind::inductive;
  s.seed = seed;
  s.ratios = {1.0 - val_fraction, val_fraction, 0.0};
  s.holdout_fraction = holdout_fraction;
  s.observed_link_fraction = observed_link_fraction;
  s.graph_hash = graph_hash(g);
  s.num_nodes = n;
  s.out_of_sample_nodes = held;
  s.val_pos.assign(in_sample.begin(), in_sample.begin() + static_cast<std::ptrdiff_t>(n_val));
  s.train_pos.assign(in_sample.begin() + static_cast<std::ptrdiff_t>(n_val), in_sample.end());
  s.train_pos.insert(s.train_pos.end(), out_of_sample.begin(),
                     out_of_sample.begin() + static_cast<std::ptrdiff_t>(n_obs));
  s.test_pos.assign(out_of_sample.begin() + static_cast<std::ptrdiff_t>(n_obs), out_of_sample.end());
  if (s.train_pos.empty() || n_val == 0) throw ConfigError("holdout leaves no in-sample edges");
  if (s.test_pos.empty()) throw ConfigError("holdout leaves no out-of-sample test edges");

  // Nodes visible during training: every in-sample node, plus held-out
  // nodes that carry an observed link.
  std::vector<NodeId> avail_nodes, in_nodes;
  {
    std::vector<char> available(n, 0);
    for (NodeId v = 0; v < n; ++v) available[v] = !is_held[v];
    for (const auto& e : s.train_pos) available[e.u] = available[e.v] = 1;
    for (NodeId v = 0; v < n; ++v) {
      if (available[v]) avail_nodes.push_back(v);
      if (!is_held[v]) in_nodes.push_back(v);
    }
  }

  const auto train_set = edge_set(s.train_pos);
  std::unordered_set<std::uint64_t> taken;
  Rng train_rng(derive_seed(seed, "inductive/train_neg"));
  s.train_neg = sample_negative_edges(
      s.train_pos.size(), uniform_pair_over(avail_nodes),
      [&](const Edge& e) { return train_set.count(pack_edge(e)) > 0; }, taken, train_rng);

  taken.clear();
  const auto not_observed = [&](const Edge& e) { return g.has_edge(e.u, e.v); };
  Rng val_rng(derive_seed(seed, "inductive/val_neg"));
  s.val_neg = sample_negative_edges(s.val_pos.size(), uniform_pair_over(in_nodes), not_observed,
                                    taken, val_rng);
  Rng test_rng(derive_seed(seed, "inductive/test_neg"));
  const auto touching_held = [&held, n](Rng& rng) {
    const NodeId a = held[rng.uniform(held.size())];
    const auto b = static_cast<NodeId>(rng.uniform(n));
    return make_edge(a, b);
  };
  s.test_neg = sample_negative_edges(s.test_pos.size(), touching_held, not_observed, taken, test_rng);

  InductiveSplit out;
  out.view = make_inductive_view(g, s);
  out.split = std::move(s);
  return out;
}

InductiveView make_inductive_view(const AttributedGraph& g, const DataSplit& s) {
  if (s.kind != SplitKind::inductive) throw ValidationError("split is not inductive");
  if (s.num_nodes != g.num_nodes()) throw ValidationError("split does not match the graph's node count");
  const std::size_t n = g.num_nodes();
  std::vector<char> available(n, 1);
  for (NodeId v : s.out_of_sample_nodes) available[v] = 0;
  for (const auto& e : s.train_pos) available[e.u] = available[e.v] = 1;

  InductiveView view;
  view.global_to_local.assign(n, InductiveView::kInvalid);
  std::vector<std::vector<AttrEntry>> local_rows;
  std::vector<std::string> local_tokens;
  for (NodeId v = 0; v < n; ++v) {
    if (!available[v]) continue;
    view.global_to_local[v] = static_cast<NodeId>(view.local_to_global.size());
    view.local_to_global.push_back(v);
    const auto row = g.attributes(v);
    local_rows.emplace_back(row.begin(), row.end());
    if (!g.tokens().empty()) local_tokens.push_back(g.tokens()[v]);
  }
  const auto to_local = [&view](const Edge& e) {
    return make_edge(view.global_to_local[e.u], view.global_to_local[e.v]);
  };
  auto& local = view.training_split;
  local = s;
  local.test_pos.clear();
  local.test_neg.clear();
  local.out_of_sample_nodes.clear();
  local.num_nodes = view.local_to_global.size();
  for (auto* set : {&local.train_pos, &local.val_pos, &local.train_neg, &local.val_neg})
    for (auto& e : *set) {
      if (view.global_to_local[e.u] == InductiveView::kInvalid || view.global_to_local[e.v] == InductiveView::kInvalid)
        throw ValidationError("inductive split: training or validation pair touches an unseen node");
      e = to_local(e);
    }

  view.in_sample_graph =
      AttributedGraph::build(local.num_nodes, local.train_pos,
                             g.has_attributes() ? AttributeRows::from_rows(std::move(local_rows), g.attr_dim())
                                                : AttributeRows{},
                             std::move(local_tokens));
  local.graph_hash = graph_hash(view.in_sample_graph);

  view.held_out = s.out_of_sample_nodes;
  std::sort(view.held_out.begin(), view.held_out.end());
  std::vector<std::vector<AttrEntry>> held_rows;
  for (NodeId v : view.held_out) {
    const auto row = g.attributes(v);
    held_rows.emplace_back(row.begin(), row.end());
  }
  if (g.has_attributes()) view.held_out_attrs = AttributeRows::from_rows(std::move(held_rows), g.attr_dim());
  return view;
}

AttributedGraph training_graph(const AttributedGraph& g, const DataSplit& split) {
  return g.with_edges(split.train_pos);
}

}  // namespace cssl
