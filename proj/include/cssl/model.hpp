#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cssl/graph.hpp"
#include "cssl/sampling.hpp"

namespace cssl {

enum class AggregationOp { average, hadamard, weighted_l1, weighted_l2 };

std::string to_string(AggregationOp op);   // "avg", "hadamard", "l1", "l2"
AggregationOp parse_aggregation_op(const std::string& s);
// Preference order used to break validation ties: l2, l1, hadamard, avg.
int tie_rank(AggregationOp op);

struct Dims {
  std::size_t d = 0;  // embedding dimension
  std::size_t m = 0;  // attribute dimension
  std::size_t n = 0;  // node count (rows of the context table)
  friend bool operator==(const Dims&, const Dims&) = default;
};

// Learnable parameters. The attribute transform is stored one attribute
// column at a time (column c occupies w_emb[c*d, (c+1)*d)), so that a sparse
// attribute vector touches contiguous memory.
struct ModelParams {
  Dims dims;
  std::vector<double> w_emb;   // d x m, column-major
  std::vector<double> w_link;  // d
  std::vector<double> psi;     // n x d, row-major

  explicit ModelParams(Dims dims = {});

  double& emb(std::size_t row, std::size_t col) { return w_emb[col * dims.d + row]; }
  double emb(std::size_t row, std::size_t col) const { return w_emb[col * dims.d + row]; }
  std::span<double> emb_column(std::size_t c) { return {w_emb.data() + c * dims.d, dims.d}; }
  std::span<const double> emb_column(std::size_t c) const { return {w_emb.data() + c * dims.d, dims.d}; }
  std::span<double> psi_row(NodeId v) { return {psi.data() + std::size_t{v} * dims.d, dims.d}; }
  std::span<const double> psi_row(NodeId v) const { return {psi.data() + std::size_t{v} * dims.d, dims.d}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Glorot-uniform attribute and link weights; zero context table.
ModelParams init_params(Dims dims, std::uint64_t seed);

inline double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

constexpr double kProbClamp = 1e-12;

// Binary cross entropy with p clamped to [1e-12, 1 - 1e-12].
double bce(double y, double p);

// sigmoid(W_emb x), over the nonzero columns of x only.
void node_embed(const ModelParams& params, std::span<const AttrEntry> x, std::span<double> out);
std::vector<double> node_embed(const ModelParams& params, std::span<const AttrEntry> x);

void aggregate(AggregationOp op, std::span<const double> a, std::span<const double> b,
               std::span<double> out);
std::vector<double> aggregate(AggregationOp op, std::span<const double> a, std::span<const double> b);

double link_prob(const ModelParams& params, AggregationOp op, std::span<const AttrEntry> x_i,
                 std::span<const AttrEntry> x_j);

// Context embedding: the Psi row of a node context, or the sum of the member
// rows (with multiplicity) for a subgraph context.
void context_embedding(const ModelParams& params, std::span<const NodeId> members, std::span<double> out);
double context_prob(const ModelParams& params, std::span<const double> phi, std::span<const NodeId> members);

enum class LossMode { joint, link_only, context_only };

struct LossSpec {
  LossMode mode = LossMode::joint;
  double context_weight = 1.0;
};

// One edge of a minibatch together with the contexts drawn for its
// endpoints. A missing context contributes nothing to the context loss.
struct BatchExample {
  std::span<const AttrEntry> x_i;
  std::span<const AttrEntry> x_j;
  std::uint8_t y = 0;
  std::optional<ContextSample> c_i;
  std::optional<ContextSample> c_j;
};

struct ForwardCache {
  std::size_t batch = 0;
  std::size_t d = 0;
  std::vector<double> phi_i, phi_j, edge;  // batch x d
  std::vector<double> ctx_i, ctx_j;        // batch x d, summed Psi rows
  std::vector<double> y_hat, z_hat_i, z_hat_j;
};

struct LossValue {
  double total = 0.0;
  double link = 0.0;
  double context = 0.0;
};

// Batch-mean loss.
LossValue batch_loss(const ModelParams& params, AggregationOp op, std::span<const BatchExample> batch,
                     LossSpec spec, ForwardCache& cache);
LossValue batch_loss(const ModelParams& params, AggregationOp op, std::span<const BatchExample> batch,
                     LossSpec spec);

// Sparse gradient of the batch-mean loss. Only touched attribute columns and
// Psi rows are stored.
struct Gradients {
  std::size_t d = 0;
  std::vector<std::uint32_t> emb_cols;
  std::vector<double> emb_values;  // emb_cols.size() x d
  std::vector<double> link;        // d
  std::vector<NodeId> psi_rows;
  std::vector<double> psi_values;  // psi_rows.size() x d

  std::span<const double> emb_grad(std::size_t k) const { return {emb_values.data() + k * d, d}; }
  std::span<const double> psi_grad(std::size_t k) const { return {psi_values.data() + k * d, d}; }
  bool all_finite() const;
};

Gradients backward(const ModelParams& params, AggregationOp op, const ForwardCache& cache,
                   std::span<const BatchExample> batch, LossSpec spec);

// theta <- theta - lr * g on the stored entries. Throws DivergenceError on a
// non-finite gradient, before modifying anything.
void sgd_step(ModelParams& params, const Gradients& grads, double lr);

using AttributeLookup = std::function<std::span<const AttrEntry>(NodeId)>;

// Link probabilities of many pairs. The OpenMP version and the serial
// reference agree exactly.
std::vector<double> score_pairs(const ModelParams& params, AggregationOp op, std::span<const Edge> pairs,
                                const AttributeLookup& attrs);
std::vector<double> score_pairs_serial(const ModelParams& params, AggregationOp op,
                                       std::span<const Edge> pairs, const AttributeLookup& attrs);

}  // namespace cssl
