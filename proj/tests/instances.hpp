#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cssl/model.hpp"
#include "cssl/rng.hpp"
#include "oracles.hpp"

namespace cssl::test {

enum class ContextChoice { node, subgraph, none };

inline const char* name_of(ContextChoice c) {
  return c == ContextChoice::node ? "node" : c == ContextChoice::subgraph ? "subgraph" : "none";
}

inline const char* name_of(LossMode m) {
  return m == LossMode::joint ? "joint" : m == LossMode::link_only ? "link_only" : "context_only";
}

// A small random batch with its own storage; spans in `batch` point into
// `attrs` and `members`, so instances are not copyable.
struct Instance {
  ModelParams params;
  AggregationOp op = AggregationOp::weighted_l2;
  LossSpec spec;
  std::vector<std::vector<AttrEntry>> attrs;
  std::vector<std::vector<NodeId>> members;
  std::vector<BatchExample> batch;

  Instance() = default;
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;
};

inline std::vector<AttrEntry> random_attrs(std::size_t m, Rng& rng) {
  const std::size_t nnz = 1 + rng.uniform(std::min<std::size_t>(m, 5));
  std::vector<char> used(m, 0);
  std::vector<AttrEntry> out;
  while (out.size() < nnz) {
    const auto c = static_cast<std::uint32_t>(rng.uniform(m));
    if (used[c]) continue;
    used[c] = 1;
    out.push_back({c, rng.uniform(-1.5, 1.5)});
  }
  std::sort(out.begin(), out.end(), [](const AttrEntry& a, const AttrEntry& b) { return a.index < b.index; });
  return out;
}

// d <= 8, m <= 20, n <= 12, batch <= 4.
inline std::unique_ptr<Instance> make_instance(std::uint64_t seed, AggregationOp op, ContextChoice ctx,
                                               LossMode mode) {
  Rng rng(seed);
  auto inst = std::make_unique<Instance>();
  const Dims dims{2 + rng.uniform(7), 3 + rng.uniform(18), 3 + rng.uniform(10)};
  inst->params = ModelParams(dims);
  for (auto& w : inst->params.w_emb) w = rng.uniform(-1.0, 1.0);
  for (auto& w : inst->params.w_link) w = rng.uniform(-1.5, 1.5);
  for (auto& w : inst->params.psi) w = rng.uniform(-1.0, 1.0);
  inst->op = op;
  inst->spec = {mode, 0.5 + rng.uniform01()};

  const std::size_t n = 1 + rng.uniform(4);
  inst->attrs.reserve(2 * n);
  inst->members.reserve(2 * n);
  struct Draft {
    std::uint8_t y;
    int ci = -1, cj = -1;
    std::uint8_t zi = 0, zj = 0;
  };
  std::vector<Draft> drafts(n);
  for (std::size_t k = 0; k < n; ++k) {
    inst->attrs.push_back(random_attrs(dims.m, rng));
    inst->attrs.push_back(random_attrs(dims.m, rng));
    drafts[k].y = static_cast<std::uint8_t>(rng.uniform(2));
    if (ctx == ContextChoice::none) continue;
    for (int side = 0; side < 2; ++side) {
      // Roughly one endpoint in eight has no context, as for isolated nodes.
      if (rng.uniform(8) == 0) continue;
      const std::size_t size = ctx == ContextChoice::node ? 1 : 2 + rng.uniform(3);
      std::vector<NodeId> mem;
      for (std::size_t i = 0; i < size; ++i) mem.push_back(static_cast<NodeId>(rng.uniform(dims.n)));
      inst->members.push_back(std::move(mem));
      const int idx = static_cast<int>(inst->members.size() - 1);
      const auto z = static_cast<std::uint8_t>(rng.uniform(2));
      if (side == 0) {
        drafts[k].ci = idx;
        drafts[k].zi = z;
      } else {
        drafts[k].cj = idx;
        drafts[k].zj = z;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    BatchExample ex;
    ex.x_i = inst->attrs[2 * k];
    ex.x_j = inst->attrs[2 * k + 1];
    ex.y = drafts[k].y;
    if (drafts[k].ci >= 0) ex.c_i = ContextSample{0, inst->members[drafts[k].ci], drafts[k].zi};
    if (drafts[k].cj >= 0) ex.c_j = ContextSample{1, inst->members[drafts[k].cj], drafts[k].zj};
    inst->batch.push_back(ex);
  }
  return inst;
}

struct GradientCheck {
  double max_rel_error = 0.0;
  double loss_gap = 0.0;         // implementation vs oracle loss
  double max_untouched = 0.0;    // largest |FD| outside the sparse pattern
};

inline GradientCheck check_gradients(const Instance& inst) {
  ForwardCache cache;
  const auto loss = batch_loss(inst.params, inst.op, inst.batch, inst.spec, cache);
  const auto grads = backward(inst.params, inst.op, cache, inst.batch, inst.spec);
  const auto analytic = oracle::densify(grads, inst.params.dims);
  const auto numeric = oracle::central_differences(inst.params, [&](const ModelParams& p) {
    return batch_loss(p, inst.op, inst.batch, inst.spec).total;
  });

  GradientCheck out;
  out.max_rel_error = std::max({oracle::max_relative_error(analytic.w_emb, numeric.w_emb),
                                oracle::max_relative_error(analytic.w_link, numeric.w_link),
                                oracle::max_relative_error(analytic.psi, numeric.psi)});
  out.loss_gap = std::abs(loss.total - oracle::batch_loss(inst.params, inst.op, inst.batch, inst.spec));

  const std::size_t d = inst.params.dims.d;
  std::vector<char> col_touched(inst.params.dims.m, 0), row_touched(inst.params.dims.n, 0);
  for (auto c : grads.emb_cols) col_touched[c] = 1;
  for (auto r : grads.psi_rows) row_touched[r] = 1;
  for (std::size_t c = 0; c < inst.params.dims.m; ++c)
    if (!col_touched[c])
      for (std::size_t r = 0; r < d; ++r) out.max_untouched = std::max(out.max_untouched, std::abs(numeric.w_emb[c * d + r]));
  for (std::size_t v = 0; v < inst.params.dims.n; ++v)
    if (!row_touched[v])
      for (std::size_t r = 0; r < d; ++r) out.max_untouched = std::max(out.max_untouched, std::abs(numeric.psi[v * d + r]));
  return out;
}

}  // namespace cssl::test
