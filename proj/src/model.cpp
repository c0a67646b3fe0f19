#include "cssl/model.hpp"

#include <algorithm>
#include <exception>
#include <unordered_map>

#include "cssl/errors.hpp"
#include "cssl/rng.hpp"

namespace cssl {

std::string to_string(AggregationOp op) {
  switch (op) {
    case AggregationOp::average: return "avg";
    case AggregationOp::hadamard: return "hadamard";
    case AggregationOp::weighted_l1: return "l1";
    case AggregationOp::weighted_l2: return "l2";
  }
  return "?";
}

AggregationOp parse_aggregation_op(const std::string& s) {
  if (s == "avg" || s == "average") return AggregationOp::average;
  if (s == "hadamard") return AggregationOp::hadamard;
  if (s == "l1" || s == "weighted-l1") return AggregationOp::weighted_l1;
  if (s == "l2" || s == "weighted-l2") return AggregationOp::weighted_l2;
  throw ConfigError("unknown aggregation operator '" + s + "'");
}

int tie_rank(AggregationOp op) {
  switch (op) {
    case AggregationOp::weighted_l2: return 0;
    case AggregationOp::weighted_l1: return 1;
    case AggregationOp::hadamard: return 2;
    case AggregationOp::average: return 3;
  }
  return 4;
}

ModelParams::ModelParams(Dims d)
    : dims(d), w_emb(d.d * d.m, 0.0), w_link(d.d, 0.0), psi(d.n * d.d, 0.0) {}

ModelParams init_params(Dims dims, std::uint64_t seed) {
  if (dims.d == 0 || dims.m == 0 || dims.n == 0) throw ConfigError("model dimensions must be >= 1");
  ModelParams p(dims);
  const double emb_bound = std::sqrt(6.0 / static_cast<double>(dims.m + dims.d));
  const double link_bound = std::sqrt(6.0 / static_cast<double>(dims.d + 1));
  Rng emb_rng(derive_seed(seed, "init/w_emb"));
  for (auto& w : p.w_emb) w = emb_rng.uniform(-emb_bound, emb_bound);
  Rng link_rng(derive_seed(seed, "init/w_link"));
  for (auto& w : p.w_link) w = link_rng.uniform(-link_bound, link_bound);
  return p;
}

double bce(double y, double p) {
  p = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return -y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
}

void node_embed(const ModelParams& params, std::span<const AttrEntry> x, std::span<double> out) {
  const std::size_t d = params.dims.d;
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& a : x) {
    if (a.index >= params.dims.m)
      throw ValidationError("attribute index " + std::to_string(a.index) + " out of range");
    const double* col = params.w_emb.data() + std::size_t{a.index} * d;
    for (std::size_t r = 0; r < d; ++r) out[r] += col[r] * a.value;
  }
  for (auto& v : out) v = sigmoid(v);
}

std::vector<double> node_embed(const ModelParams& params, std::span<const AttrEntry> x) {
  std::vector<double> out(params.dims.d);
  node_embed(params, x, out);
  return out;
}

void aggregate(AggregationOp op, std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (a.size() != b.size() || out.size() != a.size())
    throw std::invalid_argument("aggregate: embedding length mismatch");
  const std::size_t d = a.size();
  switch (op) {
    case AggregationOp::average:
      for (std::size_t r = 0; r < d; ++r) out[r] = (a[r] + b[r]) / 2.0;
      break;
    case AggregationOp::hadamard:
      for (std::size_t r = 0; r < d; ++r) out[r] = a[r] * b[r];
      break;
    case AggregationOp::weighted_l1:
      for (std::size_t r = 0; r < d; ++r) out[r] = std::abs(a[r] - b[r]);
      break;
    case AggregationOp::weighted_l2:
      for (std::size_t r = 0; r < d; ++r) out[r] = (a[r] - b[r]) * (a[r] - b[r]);
      break;
  }
}

std::vector<double> aggregate(AggregationOp op, std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  aggregate(op, a, b, out);
  return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * b[r];
  return s;
}

}  // namespace

double link_prob(const ModelParams& params, AggregationOp op, std::span<const AttrEntry> x_i,
                 std::span<const AttrEntry> x_j) {
  const std::size_t d = params.dims.d;
  std::vector<double> buf(3 * d);
  std::span<double> phi_i(buf.data(), d), phi_j(buf.data() + d, d), edge(buf.data() + 2 * d, d);
  node_embed(params, x_i, phi_i);
  node_embed(params, x_j, phi_j);
  aggregate(op, phi_i, phi_j, edge);
  return sigmoid(dot(params.w_link, edge));
}

void context_embedding(const ModelParams& params, std::span<const NodeId> members, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (NodeId u : members) {
    if (u >= params.dims.n) throw ValidationError("context node " + std::to_string(u) + " out of range");
    const auto row = params.psi_row(u);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += row[r];
  }
}

double context_prob(const ModelParams& params, std::span<const double> phi, std::span<const NodeId> members) {
  std::vector<double> ctx(params.dims.d);
  context_embedding(params, members, ctx);
  return sigmoid(dot(phi, ctx));
}

LossValue batch_loss(const ModelParams& params, AggregationOp op, std::span<const BatchExample> batch,
                     LossSpec spec, ForwardCache& cache) {
  const std::size_t n = batch.size();
  const std::size_t d = params.dims.d;
  cache.batch = n;
  cache.d = d;
  for (auto* v : {&cache.phi_i, &cache.phi_j, &cache.edge, &cache.ctx_i, &cache.ctx_j}) v->assign(n * d, 0.0);
  cache.y_hat.assign(n, 0.5);
  cache.z_hat_i.assign(n, 0.5);
  cache.z_hat_j.assign(n, 0.5);

  const bool with_link = spec.mode != LossMode::context_only;
  const bool with_context = spec.mode != LossMode::link_only;
  LossValue loss;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ex = batch[k];
    std::span<double> phi_i(cache.phi_i.data() + k * d, d), phi_j(cache.phi_j.data() + k * d, d);
    node_embed(params, ex.x_i, phi_i);
    node_embed(params, ex.x_j, phi_j);
    if (with_link) {
      std::span<double> edge(cache.edge.data() + k * d, d);
      aggregate(op, phi_i, phi_j, edge);
      cache.y_hat[k] = sigmoid(dot(params.w_link, edge));
      loss.link += bce(ex.y, cache.y_hat[k]);
    }
    if (with_context) {
      if (ex.c_i) {
        std::span<double> ctx(cache.ctx_i.data() + k * d, d);
        context_embedding(params, ex.c_i->members, ctx);
        cache.z_hat_i[k] = sigmoid(dot(phi_i, ctx));
        loss.context += bce(ex.c_i->label, cache.z_hat_i[k]);
      }
      if (ex.c_j) {
        std::span<double> ctx(cache.ctx_j.data() + k * d, d);
        context_embedding(params, ex.c_j->members, ctx);
        cache.z_hat_j[k] = sigmoid(dot(phi_j, ctx));
        loss.context += bce(ex.c_j->label, cache.z_hat_j[k]);
      }
    }
  }
  if (n > 0) {
    loss.link /= static_cast<double>(n);
    loss.context /= static_cast<double>(n);
  }
  loss.total = loss.link + spec.context_weight * loss.context;
  return loss;
}

LossValue batch_loss(const ModelParams& params, AggregationOp op, std::span<const BatchExample> batch,
                     LossSpec spec) {
  ForwardCache cache;
  return batch_loss(params, op, batch, spec, cache);
}

bool Gradients::all_finite() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(emb_values.begin(), emb_values.end(), finite) &&
         std::all_of(link.begin(), link.end(), finite) &&
         std::all_of(psi_values.begin(), psi_values.end(), finite);
}

namespace {

// Accumulates d-length gradient rows keyed by an index.
class SparseRows {
 public:
  explicit SparseRows(std::size_t d) : d_(d) {}

  std::span<double> row(std::uint32_t key) {
    auto [it, inserted] = slot_.try_emplace(key, keys_.size());
    if (inserted) {
      keys_.push_back(key);
      values_.resize(values_.size() + d_, 0.0);
    }
    return {values_.data() + it->second * d_, d_};
  }

  template <typename Key>
  void move_into(std::vector<Key>& keys, std::vector<double>& values) {
    keys.assign(keys_.begin(), keys_.end());
    values = std::move(values_);
  }

 private:
  std::size_t d_;
  std::unordered_map<std::uint32_t, std::size_t> slot_;
  std::vector<std::uint32_t> keys_;
  std::vector<double> values_;
};

}  // namespace

Gradients backward(const ModelParams& params, AggregationOp op, const ForwardCache& cache,
                   std::span<const BatchExample> batch, LossSpec spec) {
  const std::size_t n = batch.size();
  const std::size_t d = params.dims.d;
  if (cache.batch != n || cache.d != d) throw std::logic_error("backward: stale forward cache");

  Gradients g;
  g.d = d;
  g.link.assign(d, 0.0);
  if (n == 0) return g;
  SparseRows emb(d), psi(d);
  const bool with_link = spec.mode != LossMode::context_only;
  const bool with_context = spec.mode != LossMode::link_only;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> d_phi_i(d), d_phi_j(d);

  auto context_grad = [&](const std::optional<ContextSample>& c, double z_hat, std::span<const double> phi,
                          std::span<const double> ctx, std::span<double> d_phi) {
    if (!c) return;
    const double g_t = spec.context_weight * (z_hat - c->label) * inv_n;
    for (std::size_t r = 0; r < d; ++r) d_phi[r] += g_t * ctx[r];
    for (NodeId u : c->members) {
      auto row = psi.row(u);
      for (std::size_t r = 0; r < d; ++r) row[r] += g_t * phi[r];
    }
  };

  auto embed_grad = [&](std::span<const AttrEntry> x, std::span<const double> phi, std::span<double> d_phi) {
    for (std::size_t r = 0; r < d; ++r) d_phi[r] *= phi[r] * (1.0 - phi[r]);
    for (const auto& a : x) {
      auto col = emb.row(a.index);
      for (std::size_t r = 0; r < d; ++r) col[r] += d_phi[r] * a.value;
    }
  };

  for (std::size_t k = 0; k < n; ++k) {
    const auto& ex = batch[k];
    std::span<const double> phi_i(cache.phi_i.data() + k * d, d), phi_j(cache.phi_j.data() + k * d, d);
    std::fill(d_phi_i.begin(), d_phi_i.end(), 0.0);
    std::fill(d_phi_j.begin(), d_phi_j.end(), 0.0);

    if (with_link) {
      const double g_s = (cache.y_hat[k] - ex.y) * inv_n;
      const double* edge = cache.edge.data() + k * d;
      for (std::size_t r = 0; r < d; ++r) {
        g.link[r] += g_s * edge[r];
        const double dh = g_s * params.w_link[r];
        const double a = phi_i[r], b = phi_j[r];
        switch (op) {
          case AggregationOp::average:
            d_phi_i[r] += 0.5 * dh;
            d_phi_j[r] += 0.5 * dh;
            break;
          case AggregationOp::hadamard:
            d_phi_i[r] += dh * b;
            d_phi_j[r] += dh * a;
            break;
          case AggregationOp::weighted_l1: {
            const double s = a > b ? 1.0 : (a < b ? -1.0 : 0.0);
            d_phi_i[r] += dh * s;
            d_phi_j[r] -= dh * s;
            break;
          }
          case AggregationOp::weighted_l2:
            d_phi_i[r] += 2.0 * dh * (a - b);
            d_phi_j[r] -= 2.0 * dh * (a - b);
            break;
        }
      }
    }
    if (with_context) {
      context_grad(ex.c_i, cache.z_hat_i[k], phi_i, {cache.ctx_i.data() + k * d, d}, d_phi_i);
      context_grad(ex.c_j, cache.z_hat_j[k], phi_j, {cache.ctx_j.data() + k * d, d}, d_phi_j);
    }
    embed_grad(ex.x_i, phi_i, d_phi_i);
    embed_grad(ex.x_j, phi_j, d_phi_j);
  }
  emb.move_into(g.emb_cols, g.emb_values);
  psi.move_into(g.psi_rows, g.psi_values);
  return g;
}

void sgd_step(ModelParams& params, const Gradients& grads, double lr) {
  if (!(lr > 0)) throw ConfigError("learning rate must be > 0");
  if (!grads.all_finite()) throw DivergenceError("non-finite gradient", -1);
  const std::size_t d = params.dims.d;
  for (std::size_t k = 0; k < grads.emb_cols.size(); ++k) {
    auto col = params.emb_column(grads.emb_cols[k]);
    const auto g = grads.emb_grad(k);
    for (std::size_t r = 0; r < d; ++r) col[r] -= lr * g[r];
  }
  for (std::size_t r = 0; r < d; ++r) params.w_link[r] -= lr * grads.link[r];
  for (std::size_t k = 0; k < grads.psi_rows.size(); ++k) {
    auto row = params.psi_row(grads.psi_rows[k]);
    const auto g = grads.psi_grad(k);
    for (std::size_t r = 0; r < d; ++r) row[r] -= lr * g[r];
  }
}

std::vector<double> score_pairs(const ModelParams& params, AggregationOp op, std::span<const Edge> pairs,
                                const AttributeLookup& attrs) {
  std::vector<double> out(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      out[k] = link_prob(params, op, attrs(pairs[k].u), attrs(pairs[k].v));
    } catch (...) {
#pragma omp critical(cssl_score_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<double> score_pairs_serial(const ModelParams& params, AggregationOp op,
                                       std::span<const Edge> pairs, const AttributeLookup& attrs) {
  std::vector<double> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out[k] = link_prob(params, op, attrs(pairs[k].u), attrs(pairs[k].v));
  return out;
}

}  // namespace cssl
