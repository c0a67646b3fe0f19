#include "doctest.h"

#include <cmath>
#include <limits>

#include "cssl/errors.hpp"
#include "cssl/evaluation.hpp"
#include "cssl/synthetic.hpp"
#include "oracles.hpp"

using namespace cssl;

namespace {

AttributedGraph sbm(std::uint64_t seed = 2) {
  SbmConfig c;
  c.num_nodes = 200;
  c.p_in = 0.06;
  c.p_out = 0.004;
  c.attr_dim = 60;
  c.nnz_per_node = 6;
  return attributed_sbm(c, seed);
}

TrainConfig quick() {
  TrainConfig c;
  c.d = 16;
  c.epochs = 5;
  c.walks_per_node = 3;
  c.walk_length = 4;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("auc worked examples") {
  const std::vector<double> s1{0.9, 0.4, 0.5, 0.1};
  const std::vector<std::uint8_t> l1{1, 1, 0, 0};
  CHECK(auc(s1, l1) == 0.75);
  const std::vector<double> s2{0.9, 0.8, 0.2};
  const std::vector<std::uint8_t> l2{1, 1, 0};
  CHECK(auc(s2, l2) == 1.0);
  const std::vector<double> s3{0.5, 0.5, 0.5, 0.5};
  CHECK(auc(s3, l1) == 0.5);
  const std::vector<std::uint8_t> one_class{1, 1, 1, 1};
  CHECK_THROWS_AS(auc(s3, one_class), std::invalid_argument);
  const std::vector<double> bad{0.1, std::numeric_limits<double>::quiet_NaN(), 0.2, 0.3};
  CHECK_THROWS_AS(auc(bad, l1), std::invalid_argument);
}

TEST_CASE("auc agrees with pairwise counting and ignores monotone transforms") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.uniform(60);
    std::vector<double> s(n);
    std::vector<std::uint8_t> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.uniform(8)) / 8.0;  // plenty of ties
      l[i] = static_cast<std::uint8_t>(rng.uniform(2));
    }
    l[0] = 1;
    l[1] = 0;
    const double a = auc(s, l);
    CHECK(a == doctest::Approx(oracle::brute_auc(s, l)).epsilon(1e-12));
    std::vector<double> t2(n);
    for (std::size_t i = 0; i < n; ++i) t2[i] = std::exp(3.0 * s[i]) - 7.0;
    CHECK(auc(t2, l) == a);
  }
}

TEST_CASE("experiment result statistics") {
  const auto one = ExperimentResult::from_values("x", {0.9});
  CHECK(one.mean == 0.9);
  CHECK_FALSE(one.std.has_value());
  CHECK(one.summary() == "0.900");
  const auto two = ExperimentResult::from_values("x", {0.8, 1.0});
  CHECK(two.mean == doctest::Approx(0.9));
  REQUIRE(two.std.has_value());
  CHECK(*two.std == doctest::Approx(std::sqrt(0.02)));
  CHECK(two.summary() == "0.900 ± 0.141");
  const auto j = to_json(one);
  CHECK(j["auc_std"].is_null());
  CHECK(j.contains("config_hash"));
}

TEST_CASE("zero parameters score every pair alike") {
  const auto g = sbm();
  const auto split = split_links(g, {0.45, 0.05, 0.5}, 1);
  ModelParams p(Dims{8, g.attr_dim(), g.num_nodes()});
  for (auto op : {AggregationOp::average, AggregationOp::hadamard, AggregationOp::weighted_l1,
                  AggregationOp::weighted_l2})
    CHECK(evaluate_transductive(p, op, g, split).mean == 0.5);
}

TEST_CASE("transductive evaluation does not change the model") {
  const auto g = sbm();
  const auto split = split_links(g, {0.45, 0.05, 0.5}, 1);
  const auto p = init_params(Dims{8, g.attr_dim(), g.num_nodes()}, 4);
  const auto copy = p;
  const double a = evaluate_transductive(p, AggregationOp::weighted_l2, g, split).mean;
  CHECK(evaluate_transductive(p, AggregationOp::weighted_l2, g, split).mean == a);
  CHECK(p == copy);
}

TEST_CASE("inductive scores ignore the context table") {
  const auto g = sbm(5);
  const auto ind = split_inductive(g, 0.1, 0.0, 3);
  auto cfg = quick();
  const auto trained = train(ind.view.in_sample_graph, ind.view.training_split, cfg);
  auto params = trained.params;
  const auto clean = evaluate_inductive(params, cfg.op, ind.view, ind.split);
  for (auto& v : params.psi) v = std::numeric_limits<double>::quiet_NaN();
  const auto poisoned = evaluate_inductive(params, cfg.op, ind.view, ind.split);
  CHECK(clean.values == poisoned.values);
}

TEST_CASE("inductive scoring handles all-zero attribute rows") {
  auto g = sbm(6);
  std::vector<std::vector<AttrEntry>> rows(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (v % 3) rows[v].assign(g.attributes(v).begin(), g.attributes(v).end());
  g = g.with_attributes(AttributeRows::from_rows(rows, g.attr_dim()));
  const auto ind = split_inductive(g, 0.1, 0.0, 4);
  const auto p = init_params(Dims{8, g.attr_dim(), ind.view.in_sample_graph.num_nodes()}, 2);
  const auto r = evaluate_inductive(p, AggregationOp::hadamard, ind.view, ind.split);
  CHECK(std::isfinite(r.mean));
  CHECK(r.mean >= 0.0);
  CHECK(r.mean <= 1.0);
}

TEST_CASE("heuristic evaluation uses only training edges") {
  SbmConfig c;
  c.num_nodes = 120;
  c.p_in = 0.3;
  c.p_out = 0.02;
  const auto g = attributed_sbm(c, 7);
  const auto split = split_links(g, {0.45, 0.05, 0.5}, 2);
  const auto r = evaluate_heuristic(g, split, Heuristic::common_neighbors);
  CHECK(r.name == "cn");
  CHECK(r.mean > 0.6);
  CHECK(r.mean < 1.0);
  // Scoring on the full graph would see every test edge.
  std::vector<Edge> pairs = split.test_pos;
  pairs.insert(pairs.end(), split.test_neg.begin(), split.test_neg.end());
  std::vector<std::uint8_t> labels(pairs.size(), 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(split.test_pos.size()), 1);
  const auto train_scores = heuristic_scores(training_graph(g, split), Heuristic::common_neighbors, pairs);
  CHECK(r.mean == auc(train_scores, labels));
}

TEST_CASE("repeated runs are independent of the worker count") {
  const auto g = sbm(8);
  RunOptions opts;
  opts.repeats = 3;
  opts.seed = 11;
  const auto serial = run_repeated(g, quick(), opts);
  opts.jobs = 3;
  const auto parallel = run_repeated(g, quick(), opts);
  CHECK(serial.values == parallel.values);
  CHECK(serial.std.has_value());
  CHECK(serial.name == "CSSL_Neigh_Joint");
  CHECK(repeat_split_seed(1, 0) != repeat_split_seed(1, 1));
  CHECK(repeat_split_seed(1, 0) != repeat_train_seed(1, 0));

  const auto h1 = run_repeated_heuristic(g, Heuristic::jaccard, opts);
  opts.jobs = 1;
  CHECK(run_repeated_heuristic(g, Heuristic::jaccard, opts).values == h1.values);
  opts.repeats = 0;
  CHECK_THROWS_AS(run_repeated(g, quick(), opts), ConfigError);
}

TEST_CASE("noise sweep at ratio zero reproduces the clean run") {
  const auto g = sbm(9);
  RunOptions opts;
  opts.repeats = 2;
  const auto sweep = run_noise_sweep(g, {0.0, 0.2}, quick(), opts);
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0].values == run_repeated(g, quick(), opts).values);
  CHECK(sweep[1].config["noise_ratio"] == 0.2);
}

TEST_CASE("sensitivity sweep trains one model per value") {
  const auto g = sbm(10);
  const auto split = split_links(g, {0.45, 0.05, 0.5}, 3);
  const auto base = quick();
  const auto results = run_sensitivity(g, split, base, SweepAxis::neg_k, {1, 2, 3, 4});
  REQUIRE(results.size() == 4);
  const auto trained = train(g, split, base);
  CHECK(results[0].mean == evaluate_transductive(trained.params, base.op, g, split).mean);
  CHECK(results[2].config["value"] == 3);
  CHECK(parse_sweep_axis("walk-len") == SweepAxis::walk_len);
  CHECK_THROWS_AS(parse_sweep_axis("lr"), ConfigError);
  CHECK_THROWS_AS(run_sensitivity(g, split, base, SweepAxis::d, {}), ConfigError);
}

TEST_CASE("operator selection") {
  CHECK(tie_rank(AggregationOp::weighted_l2) < tie_rank(AggregationOp::weighted_l1));
  CHECK(tie_rank(AggregationOp::weighted_l1) < tie_rank(AggregationOp::hadamard));
  CHECK(tie_rank(AggregationOp::hadamard) < tie_rank(AggregationOp::average));

  const auto g = sbm(12);
  const auto split = split_links(g, {0.45, 0.05, 0.5}, 4);
  auto base = quick();
  const auto one = select_operator(g, split, base, {AggregationOp::hadamard});
  CHECK(one.best == AggregationOp::hadamard);
  REQUIRE(one.best_model.has_value());
  base.op = AggregationOp::hadamard;
  CHECK(one.best_model->params == train(g, split, base).params);

  const auto all = select_operator(g, split, base,
                                   {AggregationOp::average, AggregationOp::hadamard, AggregationOp::weighted_l1,
                                    AggregationOp::weighted_l2});
  double best = 0.0;
  for (const auto& [op, v] : all.val_auc) best = std::max(best, v);
  for (const auto& [op, v] : all.val_auc)
    if (op == all.best) CHECK(v == best);
  CHECK_THROWS_AS(select_operator(g, split, base, {}), ConfigError);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{1e3, 1e4, 1e5, 1e6};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.1));
  CHECK(loglog_slope(x, y) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK_THROWS_AS(loglog_slope(std::span<const double>(x).first(1), std::span<const double>(y).first(1)),
                  std::invalid_argument);
}
