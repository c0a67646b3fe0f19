#pragma once

// Reference computations used only by tests. Each one recomputes a quantity
// from first principles, without calling the code path it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "cssl/graph.hpp"
#include "cssl/model.hpp"
#include "cssl/rng.hpp"

namespace cssl::oracle {

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline std::vector<double> dense(std::span<const AttrEntry> x, std::size_t m) {
  std::vector<double> out(m, 0.0);
  for (const auto& a : x) out[a.index] = a.value;
  return out;
}

// sigma(W x) with W read element by element and x densified.
inline std::vector<double> embed(const ModelParams& p, std::span<const AttrEntry> x) {
  const auto xd = dense(x, p.dims.m);
  std::vector<double> out(p.dims.d);
  for (std::size_t r = 0; r < p.dims.d; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < p.dims.m; ++c) s += p.emb(r, c) * xd[c];
    out[r] = logistic(s);
  }
  return out;
}

inline double edge_component(AggregationOp op, double a, double b) {
  switch (op) {
    case AggregationOp::average: return 0.5 * (a + b);
    case AggregationOp::hadamard: return a * b;
    case AggregationOp::weighted_l1: return a > b ? a - b : b - a;
    case AggregationOp::weighted_l2: return (a - b) * (a - b);
  }
  return 0.0;
}

inline double link_prob(const ModelParams& p, AggregationOp op, std::span<const AttrEntry> xi,
                        std::span<const AttrEntry> xj) {
  const auto a = embed(p, xi), b = embed(p, xj);
  double s = 0.0;
  for (std::size_t r = 0; r < p.dims.d; ++r) s += p.w_link[r] * edge_component(op, a[r], b[r]);
  return logistic(s);
}

inline double cross_entropy(double y, double p) {
  p = std::min(std::max(p, 1e-12), 1.0 - 1e-12);
  return y > 0.5 ? -std::log(p) : -std::log(1.0 - p);
}

inline double context_prob(const ModelParams& p, const std::vector<double>& phi, std::span<const NodeId> members) {
  double s = 0.0;
  for (NodeId u : members)
    for (std::size_t r = 0; r < p.dims.d; ++r) s += phi[r] * p.psi[u * p.dims.d + r];
  return logistic(s);
}

inline double batch_loss(const ModelParams& p, AggregationOp op, std::span<const BatchExample> batch,
                         LossSpec spec) {
  double total = 0.0;
  for (const auto& ex : batch) {
    const auto a = embed(p, ex.x_i), b = embed(p, ex.x_j);
    if (spec.mode != LossMode::context_only) {
      double s = 0.0;
      for (std::size_t r = 0; r < p.dims.d; ++r) s += p.w_link[r] * edge_component(op, a[r], b[r]);
      total += cross_entropy(ex.y, logistic(s));
    }
    if (spec.mode != LossMode::link_only) {
      if (ex.c_i) total += spec.context_weight * cross_entropy(ex.c_i->label, context_prob(p, a, ex.c_i->members));
      if (ex.c_j) total += spec.context_weight * cross_entropy(ex.c_j->label, context_prob(p, b, ex.c_j->members));
    }
  }
  return batch.empty() ? 0.0 : total / static_cast<double>(batch.size());
}

// Central differences of f over every entry of every parameter tensor.
struct NumericGradient {
  std::vector<double> w_emb, w_link, psi;  // same layouts as ModelParams
};

inline NumericGradient central_differences(ModelParams p, const std::function<double(const ModelParams&)>& f,
                                           double h = 1e-6) {
  NumericGradient g;
  auto sweep = [&](std::vector<double>& tensor, std::vector<double>& out) {
    out.assign(tensor.size(), 0.0);
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double saved = tensor[i];
      tensor[i] = saved + h;
      const double up = f(p);
      tensor[i] = saved - h;
      const double down = f(p);
      tensor[i] = saved;
      out[i] = (up - down) / (2.0 * h);
    }
  };
  sweep(p.w_emb, g.w_emb);
  sweep(p.w_link, g.w_link);
  sweep(p.psi, g.psi);
  return g;
}

// Sparse analytic gradients scattered into dense tensors.
inline NumericGradient densify(const Gradients& g, const Dims& dims) {
  NumericGradient out;
  out.w_emb.assign(dims.d * dims.m, 0.0);
  out.psi.assign(dims.n * dims.d, 0.0);
  out.w_link = g.link;
  for (std::size_t k = 0; k < g.emb_cols.size(); ++k)
    for (std::size_t r = 0; r < dims.d; ++r) out.w_emb[g.emb_cols[k] * dims.d + r] += g.emb_values[k * dims.d + r];
  for (std::size_t k = 0; k < g.psi_rows.size(); ++k)
    for (std::size_t r = 0; r < dims.d; ++r) out.psi[g.psi_rows[k] * dims.d + r] += g.psi_values[k * dims.d + r];
  return out;
}

// |a - f| / max(|a|, |f|, floor). The floor keeps entries near zero, where
// the finite-difference roundoff (~1e-10) dominates, from producing
// meaningless ratios.
inline double max_relative_error(const std::vector<double>& a, const std::vector<double>& f, double floor = 1e-3) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - f[i]) / std::max({std::abs(a[i]), std::abs(f[i]), floor}));
  return worst;
}

// AUC by comparing every positive with every negative.
inline double brute_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// Neighbor sets rebuilt from a raw edge list.
struct SetGraph {
  std::vector<std::set<NodeId>> nbrs;

  SetGraph(std::size_t n, std::span<const Edge> edges) : nbrs(n) {
    for (const auto& e : edges) {
      if (e.u == e.v) continue;
      nbrs[e.u].insert(e.v);
      nbrs[e.v].insert(e.u);
    }
  }

  std::set<NodeId> common(NodeId i, NodeId j) const {
    std::set<NodeId> out;
    for (NodeId k : nbrs[i])
      if (nbrs[j].count(k)) out.insert(k);
    return out;
  }
  double cn(NodeId i, NodeId j) const { return static_cast<double>(common(i, j).size()); }
  double jaccard(NodeId i, NodeId j) const {
    std::set<NodeId> uni = nbrs[i];
    uni.insert(nbrs[j].begin(), nbrs[j].end());
    return uni.empty() ? 0.0 : cn(i, j) / static_cast<double>(uni.size());
  }
  double aa(NodeId i, NodeId j) const {
    double s = 0.0;
    for (NodeId k : common(i, j)) s += 1.0 / std::log(static_cast<double>(nbrs[k].size()));
    return s;
  }
  double pa(NodeId i, NodeId j) const {
    return static_cast<double>(nbrs[i].size()) * static_cast<double>(nbrs[j].size());
  }
};

}  // namespace cssl::oracle
