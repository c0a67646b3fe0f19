#include "cssl/training.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "cssl/errors.hpp"
#include "cssl/metrics.hpp"

namespace cssl {

std::string to_string(Strategy s) { return s == Strategy::joint ? "joint" : "pretrain"; }

std::string to_string(ContextMode c) {
  switch (c) {
    case ContextMode::node: return "node";
    case ContextMode::subgraph: return "subgraph";
    case ContextMode::none: return "none";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "joint") return Strategy::joint;
  if (s == "pretrain") return Strategy::pretrain;
  throw ConfigError("unknown strategy '" + s + "'");
}

ContextMode parse_context_mode(const std::string& s) {
  if (s == "node" || s == "neigh") return ContextMode::node;
  if (s == "subgraph") return ContextMode::subgraph;
  if (s == "none") return ContextMode::none;
  throw ConfigError("unknown context kind '" + s + "'");
}

void TrainConfig::validate() const {
  if (d == 0) throw ConfigError("embedding dimension must be >= 1");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (eval_every == 0) throw ConfigError("eval_every must be >= 1");
  if (!(lr > 0) || !std::isfinite(lr)) throw ConfigError("learning rate must be > 0");
  if (pretrain_lr && !(*pretrain_lr >= 0)) throw ConfigError("pretraining learning rate must be >= 0");
  if (!(context_weight >= 0)) throw ConfigError("context weight must be >= 0");
  if (strategy == Strategy::pretrain && context != ContextMode::none && pretrain_epochs == 0)
    throw ConfigError("pretraining strategy needs pretrain_epochs >= 1");
  if (context != ContextMode::none) walk_config().validate();
}

WalkConfig TrainConfig::walk_config() const {
  WalkConfig w;
  w.walks_per_node = walks_per_node;
  w.walk_length = walk_length;
  w.negatives_per_positive = negatives_per_positive;
  w.kind = context == ContextMode::subgraph ? ContextKind::subgraph : ContextKind::node;
  return w;
}

std::string TrainConfig::variant_name() const {
  if (context == ContextMode::none) return "CSSL_Ablated";
  return std::string("CSSL_") + (context == ContextMode::node ? "Neigh" : "Subgraph") +
         (strategy == Strategy::joint ? "_Joint" : "_Pretr");
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j;
  j["strategy"] = to_string(c.strategy);
  j["op"] = to_string(c.op);
  j["context"] = to_string(c.context);
  j["d"] = c.d;
  j["walks"] = c.walks_per_node;
  j["walk_len"] = c.walk_length;
  j["neg_k"] = c.negatives_per_positive;
  j["epochs"] = c.epochs;
  j["pretrain_epochs"] = c.pretrain_epochs;
  j["batch"] = c.batch_size;
  j["lr"] = c.lr;
  j["pretrain_lr"] = c.pretrain_lr ? nlohmann::json(*c.pretrain_lr) : nlohmann::json(nullptr);
  j["context_weight"] = c.context_weight;
  j["seed"] = c.seed;
  j["eval_every"] = c.eval_every;
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig c) {
  if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
  if (j.contains("op")) c.op = parse_aggregation_op(j["op"].get<std::string>());
  if (j.contains("context")) c.context = parse_context_mode(j["context"].get<std::string>());
  c.d = j.value("d", c.d);
  c.walks_per_node = j.value("walks", c.walks_per_node);
  c.walk_length = j.value("walk_len", c.walk_length);
  c.negatives_per_positive = j.value("neg_k", c.negatives_per_positive);
  c.epochs = j.value("epochs", c.epochs);
  c.pretrain_epochs = j.value("pretrain_epochs", c.pretrain_epochs);
  c.batch_size = j.value("batch", c.batch_size);
  c.lr = j.value("lr", c.lr);
  if (j.contains("pretrain_lr") && !j["pretrain_lr"].is_null()) c.pretrain_lr = j["pretrain_lr"].get<double>();
  c.context_weight = j.value("context_weight", c.context_weight);
  c.seed = j.value("seed", c.seed);
  c.eval_every = j.value("eval_every", c.eval_every);
  return c;
}

namespace {

nlohmann::json records_json(const std::vector<EpochRecord>& records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json e;
    e["epoch"] = r.epoch;
    e["train_loss"] = r.train_loss;
    e["val_auc"] = r.val_auc ? nlohmann::json(*r.val_auc) : nlohmann::json(nullptr);
    e["seconds"] = r.seconds;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace

nlohmann::json to_json(const TrainReport& r) {
  nlohmann::json j;
  j["variant"] = r.variant;
  j["pretrain"] = records_json(r.pretrain);
  j["epochs"] = records_json(r.epochs);
  j["best_epoch"] = r.best_epoch;
  j["best_val_auc"] = r.best_val_auc;
  j["total_seconds"] = r.total_seconds;
  return j;
}

std::size_t select_best_epoch(const std::vector<EpochRecord>& epochs) {
  std::optional<std::size_t> best;
  double best_auc = 0.0;
  for (const auto& r : epochs) {
    if (!r.val_auc) continue;
    if (!best || *r.val_auc > best_auc) {
      best = r.epoch;
      best_auc = *r.val_auc;
    }
  }
  if (!best) throw std::invalid_argument("select_best_epoch: no recorded validation AUC");
  return *best;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Trainer {
 public:
  Trainer(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg)
      : g_(g), cfg_(cfg), train_graph_(training_graph(g, split)) {
    cfg.validate();
    if (!g.has_attributes())
      throw ConfigError("graph has no attributes; use one-hot attributes for non-attributed graphs");
    if (split.num_nodes != g.num_nodes()) throw ValidationError("split does not match the graph's node count");
    canonical_ = label_edges(split.train_pos, split.train_neg);
    val_pairs_ = split.val_pos;
    val_pairs_.insert(val_pairs_.end(), split.val_neg.begin(), split.val_neg.end());
    val_labels_.assign(split.val_pos.size(), 1);
    val_labels_.resize(val_pairs_.size(), 0);
    if (cfg.context != ContextMode::none)
      store_ = build_context_store(train_graph_, cfg.walk_config(), derive_seed(cfg.seed, "contexts"));
    params_ = init_params({cfg.d, g.attr_dim(), g.num_nodes()}, derive_seed(cfg.seed, "init"));
    report_.variant = cfg.variant_name();
  }

  // One pass over the labeled training edges.
  // Batches are shuffled in place across epochs; each phase starts again
  // from the canonical order.
  double run_epoch(LossSpec spec, double lr, Rng& batch_rng, std::size_t last_good) {
    const bool draw_contexts = spec.mode != LossMode::link_only;
    double loss_sum = 0.0;
    std::vector<BatchExample> examples;
    ForwardCache cache;
    for (const auto batch : epoch_batches(labeled_, cfg_.batch_size, batch_rng)) {
      examples.clear();
      for (const auto& le : batch) {
        BatchExample ex;
        ex.x_i = g_.attributes(le.edge.u);
        ex.x_j = g_.attributes(le.edge.v);
        ex.y = le.label;
        if (draw_contexts) {
          ex.c_i = store_.next_context(le.edge.u);
          ex.c_j = store_.next_context(le.edge.v);
        }
        examples.push_back(ex);
      }
      const auto loss = batch_loss(params_, cfg_.op, examples, spec, cache);
      if (!std::isfinite(loss.total))
        throw DivergenceError("non-finite training loss", static_cast<int>(last_good));
      loss_sum += loss.total * static_cast<double>(batch.size());
      if (lr > 0) {
        const auto grads = backward(params_, cfg_.op, cache, examples, spec);
        if (!grads.all_finite()) throw DivergenceError("non-finite gradient", static_cast<int>(last_good));
        sgd_step(params_, grads, lr);
      }
    }
    return labeled_.empty() ? 0.0 : loss_sum / static_cast<double>(labeled_.size());
  }

  double validation_auc() const {
    const auto scores =
        score_pairs(params_, cfg_.op, val_pairs_, [this](NodeId v) { return g_.attributes(v); });
    return auc(scores, val_labels_);
  }

  void pretrain_phase() {
    Rng batch_rng(derive_seed(cfg_.seed, "batches/pretrain"));
    labeled_ = canonical_;
    const double lr = cfg_.pretrain_lr.value_or(cfg_.lr);
    for (std::size_t e = 1; e <= cfg_.pretrain_epochs; ++e) {
      const auto t0 = Clock::now();
      EpochRecord rec;
      rec.epoch = e;
      rec.train_loss = run_epoch({LossMode::context_only, cfg_.context_weight}, lr, batch_rng, 0);
      rec.seconds = seconds_since(t0);
      if (cfg_.progress)
        std::cerr << report_.variant << " pretrain epoch " << e << " loss " << rec.train_loss << "\n";
      report_.pretrain.push_back(rec);
    }
  }

  // Joint training or finetuning, with best-epoch selection on validation AUC.
  void main_phase(LossMode mode) {
    Rng batch_rng(derive_seed(cfg_.seed, "batches"));
    labeled_ = canonical_;
    std::optional<double> best;
    best_params_ = params_;
    for (std::size_t e = 1; e <= cfg_.epochs; ++e) {
      const auto t0 = Clock::now();
      EpochRecord rec;
      rec.epoch = e;
      rec.train_loss = run_epoch({mode, cfg_.context_weight}, cfg_.lr, batch_rng, report_.best_epoch);
      if (e % cfg_.eval_every == 0 || e == cfg_.epochs) {
        rec.val_auc = validation_auc();
        if (!best || *rec.val_auc > *best) {
          best = rec.val_auc;
          best_params_ = params_;
          report_.best_epoch = e;
          report_.best_val_auc = *best;
        }
      }
      rec.seconds = seconds_since(t0);
      if (cfg_.progress) {
        std::cerr << report_.variant << " epoch " << e << " loss " << rec.train_loss;
        if (rec.val_auc) std::cerr << " val_auc " << *rec.val_auc;
        std::cerr << "\n";
      }
      report_.epochs.push_back(rec);
    }
  }

  TrainResult finish(Clock::time_point t0) {
    report_.total_seconds = seconds_since(t0);
    return {std::move(best_params_), std::move(report_)};
  }

 private:
  const AttributedGraph& g_;
  TrainConfig cfg_;
  AttributedGraph train_graph_;
  std::vector<LabeledEdge> canonical_, labeled_;
  std::vector<Edge> val_pairs_;
  std::vector<std::uint8_t> val_labels_;
  ContextStore store_;
  ModelParams params_;
  ModelParams best_params_;
  TrainReport report_;
};

}  // namespace

TrainResult train_joint(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg) {
  const auto t0 = Clock::now();
  Trainer t(g, split, cfg);
  t.main_phase(cfg.context == ContextMode::none ? LossMode::link_only : LossMode::joint);
  return t.finish(t0);
}

TrainResult train_pretrain(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg) {
  const auto t0 = Clock::now();
  Trainer t(g, split, cfg);
  if (cfg.context != ContextMode::none) t.pretrain_phase();
  t.main_phase(LossMode::link_only);
  return t.finish(t0);
}

TrainResult train(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg) {
  return cfg.strategy == Strategy::joint ? train_joint(g, split, cfg) : train_pretrain(g, split, cfg);
}

}  // namespace cssl
