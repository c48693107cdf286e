// OpenMP kernels against their serial references, plus full clustering.
// The argument is the target edge count of a synthetic fixed-density graph.

#include <map>
#include <memory>

#include <benchmark/benchmark.h>

#include "bimod/kernels.hpp"
#include "bimod/modularity.hpp"
#include "testkit.hpp"

namespace {

using namespace bimod;

struct Fixture {
  BipartiteGraph graph;
  std::vector<ClusterId> assign;
  std::size_t n_clusters = 0;
};

const Fixture& fixture(std::int64_t edges) {
  static std::map<std::int64_t, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[edges];
  if (!slot) {
    testkit::TopicModel m;
    m.n_topics = 20;
    m.tokens_per_doc = 60;
    const auto docs = static_cast<std::size_t>(edges / 45);
    m.words_per_topic = docs / 25;
    m.shared_words = docs / 5;
    m.topic_mix = 0.6;
    auto g = testkit::synthetic_graph(m, docs, 808);
    // A mid-descent partition: one cluster per 8 vertices by id, the shape
    // aggregation sees after the first Louvain round.
    std::vector<ClusterId> assign(g.n_vertices());
    for (VertexId v = 0; v < g.n_vertices(); ++v) assign[v] = static_cast<ClusterId>(v / 8);
    const std::size_t k = (g.n_vertices() + 7) / 8;
    slot = std::make_unique<Fixture>(Fixture{std::move(g), std::move(assign), k});
  }
  return *slot;
}

template <auto Kernel>
void run_kernel(benchmark::State& state) {
  const auto& f = fixture(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.graph, f.assign, f.n_clusters));
  state.counters["edges"] = static_cast<double>(f.graph.edge_count());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.graph.edge_count()));
}

void BM_Cluster(benchmark::State& state) {
  const auto& f = fixture(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cluster(f.graph, DescentConfig{}));
  state.counters["edges"] = static_cast<double>(f.graph.edge_count());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.graph.edge_count()));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (std::int64_t e : {100000, 200000, 400000, 800000}) b->Arg(e);
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(run_kernel<kernels::quotient>)->Name("quotient/omp")->Apply(sizes);
BENCHMARK(run_kernel<kernels::quotient_serial>)->Name("quotient/serial")->Apply(sizes);
BENCHMARK(run_kernel<kernels::cluster_aggregates>)->Name("cluster_aggregates/omp")->Apply(sizes);
BENCHMARK(run_kernel<kernels::cluster_aggregates_serial>)->Name("cluster_aggregates/serial")->Apply(sizes);
BENCHMARK(BM_Cluster)->Name("cluster/interleaved")->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
