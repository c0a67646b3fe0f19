#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cssl/checkpoint.hpp"
#include "cssl/errors.hpp"
#include "cssl/evaluation.hpp"
#include "cssl/experiment.hpp"
#include "cssl/heuristics.hpp"
#include "cssl/io.hpp"
#include "cssl/split.hpp"
#include "cssl/synthetic.hpp"
#include "cssl/training.hpp"

namespace fs = std::filesystem;
using namespace cssl;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitPartial = 3;

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(s);
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(what + ": not a number: '" + s + "'");
}

SplitRatios parse_ratios(const std::string& s) {
  const auto f = split_on(s, ',');
  if (f.size() != 3) throw ConfigError("--ratios expects train,val,test");
  return {to_double(f[0], "--ratios"), to_double(f[1], "--ratios"), to_double(f[2], "--ratios")};
}

// "0.05:0.25:0.05" (start:stop:step, inclusive) or "0.05,0.25".
std::vector<double> parse_value_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  const auto range = split_on(s, ':');
  if (range.size() == 3) {
    const double lo = to_double(range[0], what), hi = to_double(range[1], what), step = to_double(range[2], what);
    if (!(step > 0)) throw ConfigError(what + ": step must be > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(std::round((lo + step * static_cast<double>(i)) * 1e12) / 1e12);
    return out;
  }
  for (const auto& f : split_on(s, ',')) out.push_back(to_double(f, what));
  if (out.empty()) throw ConfigError(what + ": no values");
  return out;
}

std::vector<std::size_t> to_counts(const std::vector<double>& values, const std::string& what) {
  std::vector<std::size_t> out;
  for (double v : values) {
    if (!(v >= 1) || v != std::floor(v)) throw ConfigError(what + ": expected positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// "1e4,1e5,1e6", or "5e3..1e7" for decades from the first bound up to the
// second.
std::vector<std::size_t> parse_sizes(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) return to_counts(parse_value_list(s, "--sizes"), "--sizes");
  const double lo = to_double(s.substr(0, dots), "--sizes");
  const double hi = to_double(s.substr(dots + 2), "--sizes");
  if (!(lo >= 1) || hi < lo) throw ConfigError("--sizes: bad range '" + s + "'");
  std::vector<double> values;
  for (double v = lo; v <= hi * (1 + 1e-12); v *= 10) values.push_back(std::round(v));
  if (values.back() < hi) values.push_back(hi);
  return to_counts(values, "--sizes");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Flags shared by the data-driven subcommands. Optional members stay unset
// unless given, so that --spec values survive.
struct DataFlags {
  std::optional<std::string> edges, attrs, manifest, out_dir, spec_file;
  bool one_hot = false;
  std::optional<int> jobs;

  void add(CLI::App& app, bool with_manifest, bool with_out_dir = true) {
    app.add_option("--edges", edges, "edge list file");
    app.add_option("--attrs", attrs, "attribute file (sparse triples or dense CSV)");
    if (with_manifest) app.add_option("--manifest", manifest, "split manifest");
    if (with_out_dir) app.add_option("--out", out_dir, "output directory");
    app.add_option("--spec", spec_file, "JSON experiment spec; flags override its fields");
    app.add_flag("--one-hot", one_hot, "replace attributes with one-hot node identities");
    app.add_option("--jobs", jobs, "threads for repeats and sweep cells")->check(CLI::PositiveNumber);
  }
};

struct TrainFlags {
  std::optional<std::string> strategy, context, op;
  std::optional<std::size_t> d, walks, walk_len, neg_k, epochs, pretrain_epochs, batch, eval_every;
  std::optional<double> lr, pretrain_lr, context_weight;
  std::optional<std::uint64_t> seed;
  bool progress = false;

  void add(CLI::App& app) {
    app.add_option("--strategy", strategy, "joint | pretrain");
    app.add_option("--context", context, "node | subgraph | none");
    app.add_option("--op", op, "avg | hadamard | l1 | l2 | auto");
    app.add_option("--d", d, "embedding dimension");
    app.add_option("--walks", walks, "walks per node");
    app.add_option("--walk-len", walk_len, "walk length, counting the start node");
    app.add_option("--neg-k", neg_k, "negative contexts per positive");
    app.add_option("--epochs", epochs, "training (or finetuning) epochs");
    app.add_option("--pretrain-epochs", pretrain_epochs, "context-only epochs of the pretrain strategy");
    app.add_option("--batch", batch, "minibatch size");
    app.add_option("--lr", lr, "SGD learning rate");
    app.add_option("--pretrain-lr", pretrain_lr, "learning rate of the pretraining phase");
    app.add_option("--context-weight", context_weight, "weight of the context loss");
    app.add_option("--eval-every", eval_every, "epochs between validation evaluations");
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--progress", progress, "print per-epoch progress to stderr");
  }

  // True when --op auto asked for operator selection.
  bool apply(TrainConfig& c) const {
    bool auto_op = false;
    if (strategy) c.strategy = parse_strategy(*strategy);
    if (context) c.context = parse_context_mode(*context);
    if (op) {
      if (*op == "auto") auto_op = true;
      else c.op = parse_aggregation_op(*op);
    }
    if (d) c.d = *d;
    if (walks) c.walks_per_node = *walks;
    if (walk_len) c.walk_length = *walk_len;
    if (neg_k) c.negatives_per_positive = *neg_k;
    if (epochs) c.epochs = *epochs;
    if (pretrain_epochs) c.pretrain_epochs = *pretrain_epochs;
    if (batch) c.batch_size = *batch;
    if (lr) c.lr = *lr;
    if (pretrain_lr) c.pretrain_lr = *pretrain_lr;
    if (context_weight) c.context_weight = *context_weight;
    if (eval_every) c.eval_every = *eval_every;
    if (seed) c.seed = *seed;
    c.progress = progress;
    return auto_op;
  }
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ExperimentSpec resolve_spec(const DataFlags& df, const TrainFlags* tf, bool* auto_op = nullptr) {
  ExperimentSpec spec;
  if (df.spec_file) spec = experiment_spec_from_json(read_json_file(*df.spec_file));
  if (df.edges) spec.edges = *df.edges;
  if (df.attrs) spec.attrs = *df.attrs;
  if (df.manifest) spec.manifest = *df.manifest;
  if (df.out_dir) spec.out_dir = *df.out_dir;
  if (df.one_hot) spec.one_hot = true;
  if (df.jobs) spec.jobs = *df.jobs;
  if (tf) {
    const bool a = tf->apply(spec.train);
    if (auto_op) *auto_op = a;
  }
  return spec;
}

struct Dataset {
  AttributedGraph graph;      // attributes as used for training
  std::uint64_t hash = 0;     // of the graph as loaded
};

Dataset load_dataset(const ExperimentSpec& spec) {
  if (spec.edges.empty()) throw ConfigError("--edges is required");
  std::optional<fs::path> attrs;
  if (!spec.attrs.empty()) attrs = spec.attrs;
  auto loaded = load_graph(spec.edges, attrs);
  if (loaded.stats.self_loops_dropped || loaded.stats.duplicate_edges)
    std::cerr << "note: dropped " << loaded.stats.self_loops_dropped << " self-loops and "
              << loaded.stats.duplicate_edges << " duplicate edges\n";
  Dataset ds;
  ds.hash = graph_hash(loaded.graph);
  ds.graph = spec.one_hot ? one_hot_attrs(loaded.graph) : std::move(loaded.graph);
  return ds;
}

DataSplit load_manifest_for(const ExperimentSpec& spec, const Dataset& ds) {
  if (spec.manifest.empty()) throw ConfigError("--manifest is required");
  auto split = read_split_manifest(spec.manifest);
  if (split.graph_hash != ds.hash)
    throw ValidationError("manifest " + spec.manifest + " was made for graph " + hash_hex(split.graph_hash) +
                          " but " + spec.edges + " hashes to " + hash_hex(ds.hash) +
                          "; re-run `cssl split` on this graph");
  if (split.num_nodes != ds.graph.num_nodes())
    throw ValidationError("manifest node count does not match the graph");
  return split;
}

fs::path out_path(const ExperimentSpec& spec, const std::string& name) {
  fs::create_directories(spec.out_dir);
  return fs::path(spec.out_dir) / name;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string print_counts(const DataSplit& s) {
  std::ostringstream os;
  os << "positives train " << s.train_pos.size() << " val " << s.val_pos.size() << " test " << s.test_pos.size()
     << "\nnegatives train " << s.train_neg.size() << " val " << s.val_neg.size() << " test " << s.test_neg.size();
  if (s.kind == SplitKind::inductive) os << "\nheld-out nodes " << s.out_of_sample_nodes.size();
  return os.str();
}

// ---- split ----

struct SplitCmd {
  DataFlags data;
  std::string ratios = "0.45,0.05,0.5";
  std::uint64_t seed = 1;
  std::string out = "split.json";
  bool inductive = false;
  double holdout = 0.1;
  double observed = 0.0;
  double val_fraction = 0.1;

  int run() const {
    const auto spec = resolve_spec(data, nullptr);
    const auto ds = load_dataset(spec);
    DataSplit split;
    if (inductive) {
      split = split_inductive(ds.graph, holdout, observed, seed, val_fraction).split;
    } else {
      split = split_links(ds.graph, parse_ratios(ratios), seed);
    }
    split.graph_hash = ds.hash;
    write_split_manifest(out, split);
    std::cout << print_counts(split) << "\nwrote " << out << "\n";
    return 0;
  }
};

// ---- train ----

struct TrainCmd {
  DataFlags data;
  TrainFlags flags;
  std::optional<std::string> dump_walks;

  int run() const {
    bool auto_op = false;
    auto spec = resolve_spec(data, &flags, &auto_op);
    spec.train.validate();
    const auto ds = load_dataset(spec);
    const auto split = load_manifest_for(spec, ds);

    // Inductive manifests train on the renumbered in-sample view.
    std::optional<InductiveView> view;
    if (split.kind == SplitKind::inductive) view = make_inductive_view(ds.graph, split);
    const AttributedGraph& g = view ? view->in_sample_graph : ds.graph;
    const DataSplit& train_split = view ? view->training_split : split;

    if (dump_walks && spec.train.context != ContextMode::none) {
      std::vector<std::vector<NodeId>> walks;
      build_context_store(training_graph(g, train_split), spec.train.walk_config(),
                          derive_seed(spec.train.seed, "contexts"), &walks);
      write_walks(*dump_walks, g, walks);
    }

    json op_selection;
    TrainResult result;
    if (auto_op) {
      auto sel = select_operator(g, train_split, spec.train,
                                 {AggregationOp::average, AggregationOp::hadamard, AggregationOp::weighted_l1,
                                  AggregationOp::weighted_l2});
      spec.train.op = sel.best;
      for (const auto& [op, a] : sel.val_auc) op_selection[to_string(op)] = a;
      result = std::move(*sel.best_model);
    } else {
      result = train(g, train_split, spec.train);
    }

    json meta;
    meta["spec"] = to_json(spec);
    meta["seed"] = spec.train.seed;
    meta["variant"] = result.report.variant;
    meta["op"] = to_string(spec.train.op);
    meta["graph_hash"] = hash_hex(ds.hash);
    meta["split_kind"] = to_string(split.kind);
    meta["split_seed"] = split.seed;
    meta["dims"] = {{"d", result.params.dims.d}, {"m", result.params.dims.m}, {"n", result.params.dims.n}};
    if (!op_selection.is_null()) meta["op_selection"] = op_selection;
    const auto ckpt = out_path(spec, "model.ckpt");
    save_checkpoint(ckpt, result.params, meta);

    json report = meta;
    report["report"] = to_json(result.report);
    write_json_file(out_path(spec, "report.json"), report);

    std::printf("%s best epoch %zu val AUC %.4f (%.1fs)\n", result.report.variant.c_str(), result.report.best_epoch,
                result.report.best_val_auc, result.report.total_seconds);
    std::cout << "wrote " << ckpt.string() << "\n";
    return 0;
  }
};

// ---- eval ----

struct EvalCmd {
  DataFlags data;
  TrainFlags flags;
  std::optional<std::string> checkpoint, heuristic, predictions, results;
  std::optional<std::string> ratios;
  std::optional<std::size_t> repeats;

  int run() const {
    auto spec = resolve_spec(data, &flags);
    if (repeats) spec.repeats = *repeats;
    if (ratios) spec.ratios = parse_ratios(*ratios);
    const auto ds = load_dataset(spec);
    const auto results_path = results ? fs::path(*results) : out_path(spec, "results.jsonl");

    ExperimentResult r;
    if (repeats) {
      // Full pipeline: fresh split, training and evaluation per repeat.
      RunOptions opts;
      opts.ratios = spec.ratios;
      opts.repeats = spec.repeats;
      opts.seed = spec.train.seed;
      opts.jobs = spec.jobs;
      if (heuristic) {
        r = run_repeated_heuristic(ds.graph, parse_heuristic(*heuristic), opts);
      } else {
        spec.train.validate();
        r = run_repeated(ds.graph, spec.train, opts);
      }
    } else {
      const auto split = load_manifest_for(spec, ds);
      std::vector<Edge> pairs = split.test_pos;
      pairs.insert(pairs.end(), split.test_neg.begin(), split.test_neg.end());
      std::vector<double> scores;
      if (heuristic) {
        const auto kind = parse_heuristic(*heuristic);
        const auto train_g = training_graph(ds.graph, split);
        scores = heuristic_scores(train_g, kind, pairs);
        r.name = to_string(kind);
      } else {
        if (!checkpoint) throw ConfigError("eval needs --checkpoint, --heuristic or --repeats");
        const auto meta = load_checkpoint_meta(*checkpoint);
        const auto params = load_checkpoint(*checkpoint);
        check_compatible(meta, params, ds, split);
        const auto op = parse_aggregation_op(meta.at("op").get<std::string>());
        if (split.kind == SplitKind::inductive) {
          const auto view = make_inductive_view(ds.graph, split);
          scores = score_pairs(params, op, pairs, [&view](NodeId v) { return view.attributes_of(v); });
        } else {
          scores = score_pairs(params, op, pairs, [&ds](NodeId v) { return ds.graph.attributes(v); });
        }
        r.name = meta.value("variant", "model");
        spec.train = train_config_from_json(meta.at("spec").at("train"), spec.train);
      }
      std::vector<std::uint8_t> labels(pairs.size(), 0);
      std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(split.test_pos.size()), 1);
      r = ExperimentResult::from_values(r.name, {auc(scores, labels)});
      if (predictions) write_predictions(*predictions, ds.graph, pairs, scores, labels);
    }

    json record = to_json(r);
    record["spec"] = to_json(spec);
    record["seed"] = spec.train.seed;
    if (checkpoint) record["checkpoint"] = *checkpoint;
    if (heuristic) record["heuristic"] = *heuristic;
    append_record(results_path, record);
    std::cout << r.name << " AUC " << r.summary() << "\n";
    return 0;
  }

  static void check_compatible(const json& meta, const ModelParams& params, const Dataset& ds,
                               const DataSplit& split) {
    const auto ckpt_hash = meta.at("graph_hash").get<std::string>();
    if (ckpt_hash != hash_hex(ds.hash))
      throw ValidationError("checkpoint was trained on graph " + ckpt_hash + " but the given graph hashes to " +
                            hash_hex(ds.hash) + "; refusing to evaluate");
    if (meta.value("split_seed", split.seed) != split.seed || meta.value("split_kind", "") != to_string(split.kind))
      throw ValidationError("checkpoint was trained on a different split than the given manifest");
    if (params.dims.m != ds.graph.attr_dim())
      throw ValidationError("checkpoint attribute dimension " + std::to_string(params.dims.m) +
                            " does not match the graph's " + std::to_string(ds.graph.attr_dim()));
    if (split.kind == SplitKind::transductive && params.dims.n != ds.graph.num_nodes())
      throw ValidationError("checkpoint node count " + std::to_string(params.dims.n) +
                            " does not match the graph's " + std::to_string(ds.graph.num_nodes()));
  }
};

// ---- sweep ----

json sweep_sidecar(const ExperimentSpec& spec, const std::string& kind, const std::vector<SweepCell>& cells) {
  json j;
  j["sweep"] = kind;
  j["spec"] = to_json(spec);
  j["seed"] = spec.train.seed;
  j["cells"] = json::array();
  for (const auto& c : cells) {
    json cell;
    cell["key"] = c.key;
    cell["status"] = c.ok() ? "ok" : "failed";
    if (c.result) cell["result"] = to_json(*c.result);
    if (!c.ok()) cell["error"] = c.error;
    j["cells"].push_back(cell);
  }
  return j;
}

int finish_sweep(const ExperimentSpec& spec, const std::string& kind, const std::vector<SweepCell>& cells,
                 const std::optional<std::string>& csv) {
  const auto path = csv ? fs::path(*csv) : out_path(spec, kind + ".csv");
  write_sweep_csv(path, kind == "noise" ? "noise_ratio" : kind == "scale" ? "train_edges" : "value", cells);
  write_json_file(fs::path(path.string() + ".json"), sweep_sidecar(spec, kind, cells));
  std::size_t failed = 0;
  for (const auto& c : cells) {
    if (c.ok()) {
      std::cout << kind << " " << c.key << ": " << c.result->name << " " << c.result->summary() << "\n";
    } else {
      ++failed;
      std::cout << kind << " " << c.key << ": FAILED " << c.error << "\n";
    }
  }
  std::cout << "wrote " << path.string() << "\n";
  if (failed) {
    std::cerr << failed << " of " << cells.size() << " sweep cells failed\n";
    return kExitPartial;
  }
  return 0;
}

template <typename Body>
std::vector<SweepCell> run_cells(const std::vector<std::string>& keys, int jobs, Body body) {
  std::vector<SweepCell> cells(keys.size());
  const auto n = static_cast<std::int64_t>(keys.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(jobs, 1)) if (jobs > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    auto& cell = cells[static_cast<std::size_t>(i)];
    cell.key = keys[static_cast<std::size_t>(i)];
    try {
      cell.result = body(static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  }
  return cells;
}

struct SweepNoiseCmd {
  DataFlags data;
  TrainFlags flags;
  std::string ratios = "0.05:0.25:0.05";
  std::optional<std::string> split_ratios, csv;
  std::optional<std::size_t> repeats;

  int run() const {
    auto spec = resolve_spec(data, &flags);
    if (repeats) spec.repeats = *repeats;
    if (split_ratios) spec.ratios = parse_ratios(*split_ratios);
    spec.train.validate();
    const auto ds = load_dataset(spec);
    const auto values = parse_value_list(ratios, "--ratios");
    std::vector<std::string> keys;
    for (double v : values) keys.push_back(format_double(v));
    RunOptions opts{spec.ratios, spec.repeats, spec.train.seed, spec.jobs};
    // Repeats are the parallel unit here, so cells run one after another.
    const auto cells = run_cells(keys, 1, [&](std::size_t i) {
      return run_noise_sweep(ds.graph, {values[i]}, spec.train, opts).front();
    });
    return finish_sweep(spec, "noise", cells, csv);
  }
};

struct SweepSensitivityCmd {
  DataFlags data;
  TrainFlags flags;
  std::string axis;
  std::string values;
  std::optional<std::string> csv;
  std::optional<std::string> split_ratios;

  int run() const {
    auto spec = resolve_spec(data, &flags);
    if (split_ratios) spec.ratios = parse_ratios(*split_ratios);
    spec.train.validate();
    const auto ds = load_dataset(spec);
    const auto split = spec.manifest.empty() ? split_links(ds.graph, spec.ratios, derive_seed(spec.train.seed, "split"))
                                             : load_manifest_for(spec, ds);
    if (split.kind != SplitKind::transductive) throw ConfigError("sensitivity sweeps need a transductive split");
    const auto ax = parse_sweep_axis(axis);
    const auto vals = to_counts(parse_value_list(values, "--values"), "--values");
    std::vector<std::string> keys;
    for (auto v : vals) keys.push_back(std::to_string(v));
    const auto cells = run_cells(keys, spec.jobs, [&](std::size_t i) {
      return run_sensitivity(ds.graph, split, spec.train, ax, {vals[i]}).front();
    });
    return finish_sweep(spec, "sensitivity_" + to_string(ax), cells, csv);
  }
};

struct SweepScaleCmd {
  DataFlags data;
  TrainFlags flags;
  std::string sizes = "1e4,1e5,1e6";
  std::optional<std::string> csv;
  ScaleFamily family;

  int run() const {
    auto spec = resolve_spec(data, &flags);
    spec.train.validate();
    const auto list = parse_sizes(sizes);
    std::vector<std::string> keys;
    for (auto s : list) keys.push_back(std::to_string(s));
    // Timings are only comparable when cells do not compete for cores.
    std::vector<std::size_t> train_edges(list.size(), 0);
    const auto cells = run_cells(keys, 1, [&](std::size_t i) {
      const auto rep = run_scalability(family, {list[i]}, spec.train);
      train_edges[i] = rep.train_edges.front();
      nlohmann::json config;
      config["train"] = to_json(spec.train);
      config["requested_train_edges"] = list[i];
      config["train_edges"] = rep.train_edges.front();
      return ExperimentResult::from_values(spec.train.variant_name(), {rep.seconds.front()}, config,
                                           rep.seconds.front());
    });
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].ok()) {
        xs.push_back(static_cast<double>(train_edges[i]));
        ys.push_back(cells[i].result->seconds);
      }
    const int rc = finish_sweep(spec, "scale", cells, csv);
    if (xs.size() >= 2) std::printf("log-log slope of training time vs edges: %.3f\n", loglog_slope(xs, ys));
    return rc;
  }
};

// ---- walks ----

struct WalksCmd {
  DataFlags data;
  TrainFlags flags;
  std::string out = "walks.txt";

  int run() const {
    auto spec = resolve_spec(data, &flags);
    const auto ds = load_dataset(spec);
    AttributedGraph g = ds.graph;
    if (!spec.manifest.empty()) {
      const auto split = load_manifest_for(spec, ds);
      g = split.kind == SplitKind::inductive ? [&] {
        auto view = make_inductive_view(ds.graph, split);
        return training_graph(view.in_sample_graph, view.training_split);
      }()
                                             : training_graph(ds.graph, split);
    }
    auto wc = spec.train.walk_config();
    wc.validate();
    std::vector<std::vector<NodeId>> walks;
    build_context_store(g, wc, derive_seed(spec.train.seed, "contexts"), &walks);
    write_walks(out, g, walks);
    std::cout << "wrote " << walks.size() << " walks to " << out << "\n";
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextualized self-supervised link prediction"};
  app.require_subcommand(1);

  SplitCmd split_cmd;
  auto* split = app.add_subcommand("split", "write a train/val/test split manifest");
  split_cmd.data.add(*split, false, false);
  split->add_option("--ratios", split_cmd.ratios, "train,val,test edge fractions");
  split->add_option("--seed", split_cmd.seed, "random seed");
  split->add_option("--out,-o", split_cmd.out, "manifest path");
  split->add_flag("--inductive", split_cmd.inductive, "hold out nodes instead of edges");
  split->add_option("--holdout", split_cmd.holdout, "fraction of nodes held out");
  split->add_option("--observed", split_cmd.observed, "fraction of held-out links revealed to training");
  split->add_option("--val-fraction", split_cmd.val_fraction, "in-sample links reserved for validation");

  TrainCmd train_cmd;
  auto* train_app = app.add_subcommand("train", "train a model on a split");
  train_cmd.data.add(*train_app, true);
  train_cmd.flags.add(*train_app);
  train_app->add_option("--dump-walks", train_cmd.dump_walks, "write the training random walks here");

  EvalCmd eval_cmd;
  auto* eval = app.add_subcommand("eval", "test AUC of a checkpoint, a heuristic, or a repeated pipeline");
  eval_cmd.data.add(*eval, true);
  eval_cmd.flags.add(*eval);
  eval->add_option("--checkpoint", eval_cmd.checkpoint, "model checkpoint");
  eval->add_option("--heuristic", eval_cmd.heuristic, "cn | jaccard | aa | pa");
  eval->add_option("--repeats", eval_cmd.repeats, "run split, training and evaluation this many times");
  eval->add_option("--ratios", eval_cmd.ratios, "split ratios for --repeats");
  eval->add_option("--predictions", eval_cmd.predictions, "write per-pair scores here");
  eval->add_option("--results", eval_cmd.results, "JSONL file to append the result record to");

  auto* sweep = app.add_subcommand("sweep", "noise, scalability and sensitivity sweeps");
  sweep->require_subcommand(1);

  SweepNoiseCmd noise_cmd;
  auto* noise = sweep->add_subcommand("noise", "AUC under attribute flipping");
  noise_cmd.data.add(*noise, false);
  noise_cmd.flags.add(*noise);
  noise->add_option("--ratios", noise_cmd.ratios, "flip ratios, start:stop:step or a comma list");
  noise->add_option("--split-ratios", noise_cmd.split_ratios, "train,val,test edge fractions");
  noise->add_option("--repeats", noise_cmd.repeats, "repeated splits per ratio");
  noise->add_option("--csv", noise_cmd.csv, "output CSV");

  SweepSensitivityCmd sens_cmd;
  auto* sens = sweep->add_subcommand("sensitivity", "one hyperparameter at a time");
  sens_cmd.data.add(*sens, true);
  sens_cmd.flags.add(*sens);
  sens->add_option("--axis", sens_cmd.axis, "d | walks | walk-len | neg-k")->required();
  sens->add_option("--values", sens_cmd.values, "comma list or start:stop:step")->required();
  sens->add_option("--split-ratios", sens_cmd.split_ratios, "train,val,test edge fractions without --manifest");
  sens->add_option("--csv", sens_cmd.csv, "output CSV");

  SweepScaleCmd scale_cmd;
  auto* scale = sweep->add_subcommand("scale", "training time on synthetic graphs of growing size");
  scale_cmd.data.add(*scale, false);
  scale_cmd.flags.add(*scale);
  scale->add_option("--sizes", scale_cmd.sizes, "training edge counts: comma list or lo..hi by decades");
  scale->add_option("--avg-degree", scale_cmd.family.avg_degree, "mean degree of the synthetic graphs");
  scale->add_option("--attr-dim", scale_cmd.family.attr_dim, "attribute dimension");
  scale->add_option("--nnz", scale_cmd.family.nnz_per_node, "nonzero attributes per node");
  scale->add_option("--csv", scale_cmd.csv, "output CSV");

  WalksCmd walks_cmd;
  auto* walks = app.add_subcommand("walks", "dump the random walks used for context sampling");
  walks_cmd.data.add(*walks, true, false);
  walks_cmd.flags.add(*walks);
  walks->add_option("--out,-o", walks_cmd.out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (split->parsed()) return split_cmd.run();
    if (train_app->parsed()) return train_cmd.run();
    if (eval->parsed()) return eval_cmd.run();
    if (noise->parsed()) return noise_cmd.run();
    if (sens->parsed()) return sens_cmd.run();
    if (scale->parsed()) return scale_cmd.run();
    if (walks->parsed()) return walks_cmd.run();
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (last good epoch " << e.last_good_epoch() << ")\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
