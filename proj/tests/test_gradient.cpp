#include "doctest.h"

#include <set>

#include "instances.hpp"

using namespace cssl;
using namespace cssl::test;

TEST_CASE("analytic gradients match central differences") {
  std::uint64_t seed = 1;
  for (auto op : {AggregationOp::average, AggregationOp::hadamard, AggregationOp::weighted_l1,
                  AggregationOp::weighted_l2})
    for (auto ctx : {ContextChoice::node, ContextChoice::subgraph, ContextChoice::none})
      for (auto mode : {LossMode::joint, LossMode::link_only, LossMode::context_only}) {
        const auto inst = make_instance(seed++, op, ctx, mode);
        const auto r = check_gradients(*inst);
        CAPTURE(to_string(op));
        CAPTURE(name_of(ctx));
        CAPTURE(name_of(mode));
        CHECK(r.max_rel_error < 1e-6);
        CHECK(r.loss_gap < 1e-10);
        CHECK(r.max_untouched < 1e-9);
      }
}

TEST_CASE("gradient sparsity follows the batch") {
  const auto inst = make_instance(77, AggregationOp::weighted_l2, ContextChoice::subgraph, LossMode::joint);
  ForwardCache cache;
  batch_loss(inst->params, inst->op, inst->batch, inst->spec, cache);
  const auto g = backward(inst->params, inst->op, cache, inst->batch, inst->spec);
  std::set<std::uint32_t> cols;
  std::set<NodeId> rows;
  for (const auto& ex : inst->batch) {
    for (const auto& a : ex.x_i) cols.insert(a.index);
    for (const auto& a : ex.x_j) cols.insert(a.index);
    for (const auto* c : {&ex.c_i, &ex.c_j})
      if (*c) rows.insert((*c)->members.begin(), (*c)->members.end());
  }
  CHECK(std::set<std::uint32_t>(g.emb_cols.begin(), g.emb_cols.end()) == cols);
  CHECK(std::set<NodeId>(g.psi_rows.begin(), g.psi_rows.end()) == rows);
  CHECK(g.emb_cols.size() == cols.size());
}
