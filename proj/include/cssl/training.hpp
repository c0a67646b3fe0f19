#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cssl/graph.hpp"
#include "cssl/model.hpp"
#include "cssl/sampling.hpp"
#include "cssl/split.hpp"

namespace cssl {

enum class Strategy { joint, pretrain };
// Structural context used by the self-supervised task; `none` trains the
// link head alone.
enum class ContextMode { node, subgraph, none };

std::string to_string(Strategy s);
std::string to_string(ContextMode c);
Strategy parse_strategy(const std::string& s);
ContextMode parse_context_mode(const std::string& s);

struct TrainConfig {
  Strategy strategy = Strategy::joint;
  AggregationOp op = AggregationOp::weighted_l2;
  ContextMode context = ContextMode::node;
  std::size_t d = 128;
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 5;
  std::size_t negatives_per_positive = 1;
  std::size_t epochs = 100;
  std::size_t pretrain_epochs = 40;
  std::size_t batch_size = 20;
  double lr = 0.05;
  std::optional<double> pretrain_lr;  // defaults to lr; 0 disables pretraining updates
  double context_weight = 1.0;
  std::uint64_t seed = 1;
  std::size_t eval_every = 1;
  bool progress = false;

  void validate() const;
  WalkConfig walk_config() const;
  // CSSL_Neigh_Joint, CSSL_Subgraph_Pretr, CSSL_Ablated, ...
  std::string variant_name() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based within its phase
  double train_loss = 0.0;
  std::optional<double> val_auc;
  double seconds = 0.0;
};

struct TrainReport {
  std::string variant;
  std::vector<EpochRecord> pretrain;  // context-only phase of the pretraining strategy
  std::vector<EpochRecord> epochs;    // joint training, or finetuning
  std::size_t best_epoch = 0;
  double best_val_auc = 0.0;
  double total_seconds = 0.0;
};

nlohmann::json to_json(const TrainReport& report);

struct TrainResult {
  ModelParams params;  // parameters at the best validation epoch
  TrainReport report;
};

// Joint training: link loss plus context loss, all parameters updated.
TrainResult train_joint(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg);
// Context-only pretraining of W_emb and Psi, then link-only finetuning of
// W_emb and W_link.
TrainResult train_pretrain(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg);
// Dispatches on cfg.strategy.
TrainResult train(const AttributedGraph& g, const DataSplit& split, const TrainConfig& cfg);

// Earliest epoch with the highest validation AUC.
std::size_t select_best_epoch(const std::vector<EpochRecord>& epochs);

}  // namespace cssl
