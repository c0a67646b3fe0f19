#include <benchmark/benchmark.h>

#include "cssl/heuristics.hpp"
#include "cssl/model.hpp"
#include "cssl/sampling.hpp"
#include "cssl/synthetic.hpp"

using namespace cssl;

namespace {

const AttributedGraph& graph() {
  static const auto g = erdos_renyi_attributed(20000, 100000, 500, 10, 1);
  return g;
}

const std::vector<Edge>& pairs() {
  static const auto p = [] {
    std::vector<Edge> out;
    Rng rng(3);
    const auto n = graph().num_nodes();
    for (int k = 0; k < 200000; ++k) {
      const auto u = static_cast<NodeId>(rng.uniform(n));
      const auto v = static_cast<NodeId>((u + 1 + rng.uniform(n - 1)) % n);
      out.push_back(make_edge(u, v));
    }
    return out;
  }();
  return p;
}

template <bool Parallel>
void context_store(benchmark::State& state) {
  WalkConfig cfg;
  cfg.kind = state.range(0) ? ContextKind::subgraph : ContextKind::node;
  for (auto _ : state) {
    auto store = Parallel ? build_context_store(graph(), cfg, 7) : build_context_store_serial(graph(), cfg, 7);
    benchmark::DoNotOptimize(store.total_size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(graph().num_nodes()));
}

template <bool Parallel>
void scoring(benchmark::State& state) {
  const auto params = init_params(Dims{static_cast<std::size_t>(state.range(0)), 500, graph().num_nodes()}, 5);
  const AttributeLookup attrs = [](NodeId v) { return graph().attributes(v); };
  for (auto _ : state) {
    auto s = Parallel ? score_pairs(params, AggregationOp::weighted_l2, pairs(), attrs)
                      : score_pairs_serial(params, AggregationOp::weighted_l2, pairs(), attrs);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs().size()));
}

template <bool Parallel>
void heuristic(benchmark::State& state) {
  const auto kind = static_cast<Heuristic>(state.range(0));
  for (auto _ : state) {
    auto s = Parallel ? heuristic_scores(graph(), kind, pairs()) : heuristic_scores_serial(graph(), kind, pairs());
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs().size()));
}

}  // namespace

BENCHMARK(context_store<false>)->Name("context_store/serial")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(context_store<true>)->Name("context_store/omp")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(scoring<false>)->Name("score_pairs/serial")->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(scoring<true>)->Name("score_pairs/omp")->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(heuristic<false>)->Name("heuristics/serial")->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(heuristic<true>)->Name("heuristics/omp")->DenseRange(0, 3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
