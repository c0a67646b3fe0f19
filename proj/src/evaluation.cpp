#include "cssl/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>

#include "cssl/errors.hpp"
#include "cssl/rng.hpp"
#include "cssl/synthetic.hpp"

namespace cssl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs body(i) for i in [0, count) on up to `jobs` threads, rethrowing the
// first failure.
template <typename Body>
void parallel_cells(std::size_t count, int jobs, Body body) {
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(cssl_cell_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentResult ExperimentResult::from_values(std::string name, std::vector<double> values,
                                               nlohmann::json config, double seconds) {
  ExperimentResult r;
  r.name = std::move(name);
  r.values = std::move(values);
  r.config = std::move(config);
  r.seconds = seconds;
  if (!r.values.empty()) {
    const double n = static_cast<double>(r.values.size());
    r.mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) / n;
    if (r.values.size() >= 2) {
      double ss = 0.0;
      for (double v : r.values) ss += (v - r.mean) * (v - r.mean);
      r.std = std::sqrt(ss / (n - 1.0));
    }
  }
  return r;
}

std::string ExperimentResult::summary() const {
  char buf[64];
  if (std)
    std::snprintf(buf, sizeof buf, "%.3f ± %.3f", mean, *std);
  else
    std::snprintf(buf, sizeof buf, "%.3f", mean);
  return buf;
}

nlohmann::json to_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["auc_mean"] = r.mean;
  j["auc_std"] = r.std ? nlohmann::json(*r.std) : nlohmann::json(nullptr);
  j["values"] = r.values;
  j["seconds"] = r.seconds;
  j["config"] = r.config;
  j["config_hash"] = hash_hex(fnv1a(r.config.dump()));
  return j;
}

std::vector<ScoredPair> score_edges(const ModelParams& params, AggregationOp op, const AttributeLookup& attrs,
                                    std::span<const Edge> positives, std::span<const Edge> negatives) {
  std::vector<Edge> pairs(positives.begin(), positives.end());
  pairs.insert(pairs.end(), negatives.begin(), negatives.end());
  const auto scores = score_pairs(params, op, pairs, attrs);
  std::vector<ScoredPair> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out[k] = {pairs[k], scores[k], static_cast<std::uint8_t>(k < positives.size() ? 1 : 0)};
  return out;
}

ExperimentResult evaluate_transductive(const ModelParams& params, AggregationOp op, const AttributedGraph& g,
                                       const DataSplit& split) {
  const auto t0 = Clock::now();
  const auto scored =
      score_edges(params, op, [&g](NodeId v) { return g.attributes(v); }, split.test_pos, split.test_neg);
  return ExperimentResult::from_values("transductive", {auc(scored)}, {}, seconds_since(t0));
}

ExperimentResult evaluate_inductive(const ModelParams& params, AggregationOp op, const InductiveView& view,
                                    const DataSplit& split) {
  const auto t0 = Clock::now();
  const auto scored = score_edges(
      params, op, [&view](NodeId v) { return view.attributes_of(v); }, split.test_pos, split.test_neg);
  return ExperimentResult::from_values("inductive", {auc(scored)}, {}, seconds_since(t0));
}

ExperimentResult evaluate_heuristic(const AttributedGraph& g, const DataSplit& split, Heuristic kind) {
  const auto t0 = Clock::now();
  const auto train_g = training_graph(g, split);
  std::vector<Edge> pairs = split.test_pos;
  pairs.insert(pairs.end(), split.test_neg.begin(), split.test_neg.end());
  const auto scores = heuristic_scores(train_g, kind, pairs);
  std::vector<std::uint8_t> labels(pairs.size(), 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(split.test_pos.size()), 1);
  return ExperimentResult::from_values(to_string(kind), {auc(scores, labels)}, {}, seconds_since(t0));
}

std::uint64_t repeat_split_seed(std::uint64_t seed, std::size_t repeat) {
  return derive_seed(seed, "repeat/split", repeat);
}

std::uint64_t repeat_train_seed(std::uint64_t seed, std::size_t repeat) {
  return derive_seed(seed, "repeat/train", repeat);
}

namespace {

nlohmann::json run_config(const TrainConfig& cfg, const RunOptions& opts) {
  nlohmann::json j;
  j["train"] = to_json(cfg);
  j["ratios"] = {opts.ratios.train, opts.ratios.val, opts.ratios.test};
  j["repeats"] = opts.repeats;
  j["seed"] = opts.seed;
  return j;
}

}  // namespace

ExperimentResult run_repeated(const AttributedGraph& g, const TrainConfig& cfg, const RunOptions& opts) {
  if (opts.repeats == 0) throw ConfigError("repeats must be >= 1");
  const auto t0 = Clock::now();
  std::vector<double> values(opts.repeats);
  parallel_cells(opts.repeats, opts.jobs, [&](std::size_t r) {
    const auto split = split_links(g, opts.ratios, repeat_split_seed(opts.seed, r));
    TrainConfig c = cfg;
    c.seed = repeat_train_seed(opts.seed, r);
    if (opts.jobs > 1) c.progress = false;
    const auto trained = train(g, split, c);
    values[r] = evaluate_transductive(trained.params, c.op, g, split).mean;
  });
  return ExperimentResult::from_values(cfg.variant_name(), std::move(values), run_config(cfg, opts),
                                       seconds_since(t0));
}

ExperimentResult run_repeated_heuristic(const AttributedGraph& g, Heuristic kind, const RunOptions& opts) {
  if (opts.repeats == 0) throw ConfigError("repeats must be >= 1");
  const auto t0 = Clock::now();
  std::vector<double> values(opts.repeats);
  parallel_cells(opts.repeats, opts.jobs, [&](std::size_t r) {
    const auto split = split_links(g, opts.ratios, repeat_split_seed(opts.seed, r));
    values[r] = evaluate_heuristic(g, split, kind).mean;
  });
  nlohmann::json config;
  config["heuristic"] = to_string(kind);
  config["ratios"] = {opts.ratios.train, opts.ratios.val, opts.ratios.test};
  config["repeats"] = opts.repeats;
  config["seed"] = opts.seed;
  return ExperimentResult::from_values(to_string(kind), std::move(values), config, seconds_since(t0));
}

std::vector<ExperimentResult> run_noise_sweep(const AttributedGraph& g, const std::vector<double>& ratios,
                                              const TrainConfig& cfg, const RunOptions& opts) {
  if (opts.repeats == 0) throw ConfigError("repeats must be >= 1");
  std::vector<ExperimentResult> out;
  for (double ratio : ratios) {
    const auto t0 = Clock::now();
    std::vector<double> values(opts.repeats);
    parallel_cells(opts.repeats, opts.jobs, [&](std::size_t r) {
      const auto noisy = flip_attributes(g, ratio, derive_seed(opts.seed, "repeat/noise", r));
      const auto split = split_links(noisy, opts.ratios, repeat_split_seed(opts.seed, r));
      TrainConfig c = cfg;
      c.seed = repeat_train_seed(opts.seed, r);
      if (opts.jobs > 1) c.progress = false;
      const auto trained = train(noisy, split, c);
      values[r] = evaluate_transductive(trained.params, c.op, noisy, split).mean;
    });
    auto config = run_config(cfg, opts);
    config["noise_ratio"] = ratio;
    out.push_back(ExperimentResult::from_values(cfg.variant_name(), std::move(values), config, seconds_since(t0)));
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalabilityReport run_scalability(const ScaleFamily& family, const std::vector<std::size_t>& train_sizes,
                                  const TrainConfig& cfg) {
  ScalabilityReport rep;
  std::vector<double> xs;
  for (std::size_t size : train_sizes) {
    const auto total = static_cast<std::size_t>(std::ceil(static_cast<double>(size) / family.ratios.train));
    const auto nodes = static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(total) / family.avg_degree));
    const auto g = erdos_renyi_attributed(nodes, total, family.attr_dim, family.nnz_per_node,
                                          derive_seed(cfg.seed, "scale/graph", size));
    const auto split = split_links(g, family.ratios, derive_seed(cfg.seed, "scale/split", size));
    const auto trained = train(g, split, cfg);
    rep.train_edges.push_back(split.train_pos.size());
    rep.seconds.push_back(trained.report.total_seconds);
    xs.push_back(static_cast<double>(split.train_pos.size()));
  }
  if (xs.size() >= 2) rep.slope = loglog_slope(xs, rep.seconds);
  return rep;
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "d") return SweepAxis::d;
  if (s == "walks" || s == "gamma") return SweepAxis::walks;
  if (s == "walk-len" || s == "l") return SweepAxis::walk_len;
  if (s == "neg-k" || s == "k") return SweepAxis::neg_k;
  throw ConfigError("unknown sweep axis '" + s + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::d: return "d";
    case SweepAxis::walks: return "walks";
    case SweepAxis::walk_len: return "walk-len";
    case SweepAxis::neg_k: return "neg-k";
  }
  return "?";
}

std::vector<ExperimentResult> run_sensitivity(const AttributedGraph& g, const DataSplit& split,
                                              const TrainConfig& base, SweepAxis axis,
                                              const std::vector<std::size_t>& values) {
  if (values.empty()) throw ConfigError("sensitivity sweep needs at least one value");
  std::vector<ExperimentResult> out;
  for (std::size_t v : values) {
    TrainConfig c = base;
    switch (axis) {
      case SweepAxis::d: c.d = v; break;
      case SweepAxis::walks: c.walks_per_node = v; break;
      case SweepAxis::walk_len: c.walk_length = v; break;
      case SweepAxis::neg_k: c.negatives_per_positive = v; break;
    }
    const auto t0 = Clock::now();
    const auto trained = train(g, split, c);
    auto r = evaluate_transductive(trained.params, c.op, g, split);
    nlohmann::json config;
    config["train"] = to_json(c);
    config["axis"] = to_string(axis);
    config["value"] = v;
    out.push_back(ExperimentResult::from_values(c.variant_name(), r.values, config, seconds_since(t0)));
  }
  return out;
}

OperatorSelection select_operator(const AttributedGraph& g, const DataSplit& split, const TrainConfig& base,
                                  const std::vector<AggregationOp>& candidates) {
  if (candidates.empty()) throw ConfigError("no candidate operators");
  OperatorSelection sel;
  std::optional<double> best_auc;
  for (AggregationOp op : candidates) {
    TrainConfig c = base;
    c.op = op;
    auto trained = train(g, split, c);
    const double val = trained.report.best_val_auc;
    sel.val_auc.emplace_back(op, val);
    const bool better = !best_auc || val > *best_auc || (val == *best_auc && tie_rank(op) < tie_rank(sel.best));
    if (better) {
      best_auc = val;
      sel.best = op;
      sel.best_model = std::move(trained);
    }
  }
  return sel;
}

}  // namespace cssl
