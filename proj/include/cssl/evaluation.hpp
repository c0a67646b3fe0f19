#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cssl/graph.hpp"
#include "cssl/heuristics.hpp"
#include "cssl/metrics.hpp"
#include "cssl/model.hpp"
#include "cssl/split.hpp"
#include "cssl/training.hpp"

namespace cssl {

// AUC over one or more repeats. `std` is present only with >= 2 values.
struct ExperimentResult {
  std::string name;
  std::vector<double> values;
  double mean = 0.0;
  std::optional<double> std;
  double seconds = 0.0;
  nlohmann::json config;

  static ExperimentResult from_values(std::string name, std::vector<double> values, nlohmann::json config = {},
                                      double seconds = 0.0);
  // "0.939 ± 0.003", or just the mean for a single value.
  std::string summary() const;
};

nlohmann::json to_json(const ExperimentResult& r);

// Scores positives and negatives together, labelled 1 and 0.
std::vector<ScoredPair> score_edges(const ModelParams& params, AggregationOp op, const AttributeLookup& attrs,
                                    std::span<const Edge> positives, std::span<const Edge> negatives);

ExperimentResult evaluate_transductive(const ModelParams& params, AggregationOp op, const AttributedGraph& g,
                                       const DataSplit& split);

// Scores the out-of-sample test pairs from attributes alone. Never touches
// the context table or the adjacency of held-out nodes.
ExperimentResult evaluate_inductive(const ModelParams& params, AggregationOp op, const InductiveView& view,
                                    const DataSplit& split);

// Heuristic scored on the split's training graph.
ExperimentResult evaluate_heuristic(const AttributedGraph& g, const DataSplit& split, Heuristic kind);

struct RunOptions {
  SplitRatios ratios;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Per-repeat seeds for the split and for training.
std::uint64_t repeat_split_seed(std::uint64_t seed, std::size_t repeat);
std::uint64_t repeat_train_seed(std::uint64_t seed, std::size_t repeat);

// Fresh split, training and test AUC per repeat.
ExperimentResult run_repeated(const AttributedGraph& g, const TrainConfig& cfg, const RunOptions& opts);
ExperimentResult run_repeated_heuristic(const AttributedGraph& g, Heuristic kind, const RunOptions& opts);

// run_repeated on attribute-flipped copies of g, one result per ratio.
std::vector<ExperimentResult> run_noise_sweep(const AttributedGraph& g, const std::vector<double>& ratios,
                                              const TrainConfig& cfg, const RunOptions& opts);

struct ScaleFamily {
  double avg_degree = 10.0;
  std::size_t attr_dim = 500;
  std::size_t nnz_per_node = 10;
  SplitRatios ratios{0.8, 0.1, 0.1};
};

struct ScalabilityReport {
  std::vector<std::size_t> train_edges;
  std::vector<double> seconds;
  double slope = 0.0;
};

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Trains on synthetic graphs whose training edge counts are `train_sizes`
// and fits the growth exponent of wall-clock time.
ScalabilityReport run_scalability(const ScaleFamily& family, const std::vector<std::size_t>& train_sizes,
                                  const TrainConfig& cfg);

enum class SweepAxis { d, walks, walk_len, neg_k };
SweepAxis parse_sweep_axis(const std::string& s);
std::string to_string(SweepAxis axis);

// One-at-a-time sweep of a single hyperparameter on a fixed split.
std::vector<ExperimentResult> run_sensitivity(const AttributedGraph& g, const DataSplit& split,
                                              const TrainConfig& base, SweepAxis axis,
                                              const std::vector<std::size_t>& values);

struct OperatorSelection {
  AggregationOp best = AggregationOp::weighted_l2;
  std::vector<std::pair<AggregationOp, double>> val_auc;
  std::optional<TrainResult> best_model;
};

// Trains one model per operator and keeps the one with the highest
// validation AUC; ties go to l2, l1, hadamard, avg in that order.
OperatorSelection select_operator(const AttributedGraph& g, const DataSplit& split, const TrainConfig& base,
                                  const std::vector<AggregationOp>& candidates);

}  // namespace cssl
