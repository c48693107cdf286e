#include <doctest.h>

#include <random>

#include "bimod/error.hpp"
#include "bimod/graph.hpp"
#include "bimod/modularity.hpp"
#include "testkit.hpp"

using namespace bimod;

TEST_SUITE("graph") {
  TEST_CASE("from_edges builds a symmetric bipartite CSR graph") {
    const auto g = testkit::two_bicliques().graph();
    CHECK(g.n_docs() == 4);
    CHECK(g.n_features() == 4);
    CHECK(g.edge_count() == 8);
    CHECK_NOTHROW(g.check());
    for (VertexId v = 0; v < g.n_vertices(); ++v) CHECK(g.degree(v) == 2);
    CHECK(g.neighbors(0)[0] == 4);
    CHECK(g.neighbors(4)[1] == 1);
    CHECK(g.label(0) == "d0");
    CHECK(g.label(5) == "f1");
  }

  TEST_CASE("duplicate edges collapse") {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> e = {{0, 0}, {0, 0}, {1, 0}};
    const auto g = BipartiteGraph::from_edges(2, 1, e);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(2) == 2);
  }

  TEST_CASE("bad input is rejected") {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> e = {{0, 3}};
    CHECK_THROWS_AS(BipartiteGraph::from_edges(1, 1, e), DataError);
    CHECK_THROWS_AS(BipartiteGraph::from_edges(1, 1, {}, {"a"}), DataError);
  }

  TEST_CASE("degree sums on each side equal L") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
      const auto el = testkit::random_bipartite(rng, 6 + t % 5, 9, 0.3);
      const auto g = el.graph();
      std::uint64_t docs = 0, feats = 0;
      for (VertexId v = 0; v < g.n_vertices(); ++v) (g.is_doc(v) ? docs : feats) += g.degree(v);
      CHECK(docs == g.edge_count());
      CHECK(feats == g.edge_count());
      CHECK(g.edge_count() == el.edges.size());
    }
  }

  TEST_CASE("canonicalize relabels by first appearance") {
    CHECK(canonical_labels(std::vector<ClusterId>{5, 5, 2}) == std::vector<ClusterId>{0, 0, 1});
    CHECK(canonical_labels(std::vector<ClusterId>{3, 1, 3, 1}) == std::vector<ClusterId>{0, 1, 0, 1});
    const std::vector<ClusterId> already = {0, 1, 0, 2};
    CHECK(canonical_labels(already) == already);
  }

  TEST_CASE("canonicalize is idempotent and keeps the equivalence relation") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
      const auto el = testkit::random_bipartite(rng, 5, 7, 0.4);
      const auto g = el.graph();
      std::vector<ClusterId> raw = testkit::random_labels(rng, g.n_vertices(), 20);
      const Partition once = canonicalize(g, raw);
      const Partition twice = canonicalize(g, once);
      CHECK(once == twice);
      CHECK(once.is_canonical());
      for (VertexId u = 0; u < g.n_vertices(); ++u) {
        for (VertexId v = 0; v < g.n_vertices(); ++v) {
          CHECK((raw[u] == raw[v]) == (once.cluster_of(u) == once.cluster_of(v)));
        }
      }
    }
  }

  TEST_CASE("partition aggregates satisfy the sum identities") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
      const auto el = testkit::random_bipartite(rng, 8, 8, 0.3);
      const auto g = el.graph();
      const Partition p(g, testkit::random_labels(rng, g.n_vertices(), 5));
      CHECK_NOTHROW(p.check(g));
      std::uint64_t d1 = 0, d2 = 0, l = 0, size = 0;
      for (ClusterId c = 0; c < p.n_clusters(); ++c) {
        d1 += p.doc_degree(c);
        d2 += p.feature_degree(c);
        l += p.internal_edges(c);
        size += p.size(c);
        CHECK(p.size(c) > 0);
      }
      CHECK(d1 == g.edge_count());
      CHECK(d2 == g.edge_count());
      CHECK(l <= g.edge_count());
      CHECK(size == g.n_vertices());
    }
  }

  TEST_CASE("partition constructor drops empty ids but keeps order") {
    const auto g = testkit::two_bicliques().graph();
    const Partition p(g, std::vector<ClusterId>{7, 7, 3, 3, 7, 7, 3, 3});
    CHECK(p.n_clusters() == 2);
    CHECK(p.cluster_of(0) == 1);
    CHECK(p.cluster_of(2) == 0);
    CHECK_THROWS_AS(Partition(g, std::vector<ClusterId>{0, 0}), DataError);
  }

  TEST_CASE("is_coarsening") {
    const auto g = testkit::two_bicliques().graph();
    const auto fine = Partition::singletons(g);
    const auto coarse = Partition::single_cluster(g);
    CHECK(is_coarsening(coarse, fine));
    CHECK_FALSE(is_coarsening(fine, coarse));
    const Partition a(g, std::vector<ClusterId>{0, 0, 1, 1, 0, 0, 1, 1});
    const Partition b(g, std::vector<ClusterId>{0, 1, 0, 1, 0, 1, 0, 1});
    CHECK_FALSE(is_coarsening(a, b));
  }

  TEST_CASE("aggregate of the component partition of two bicliques") {
    const auto g = testkit::two_bicliques().graph();
    const Partition p(g, std::vector<ClusterId>{0, 0, 1, 1, 0, 0, 1, 1});
    const AggregatedGraph ag = aggregate(g, p);
    REQUIRE(ag.n_blocks() == 2);
    CHECK(ag.internal == std::vector<std::uint64_t>{4, 4});
    CHECK(ag.neighbor.empty());
    CHECK(ag.doc_degree == std::vector<std::uint64_t>{4, 4});
    CHECK(ag.feature_degree == std::vector<std::uint64_t>{4, 4});
  }

  TEST_CASE("aggregate of singletons is isomorphic to the graph") {
    std::mt19937_64 rng(5);
    const auto g = testkit::random_bipartite(rng, 7, 9, 0.35).graph();
    const AggregatedGraph ag = aggregate(g, Partition::singletons(g));
    REQUIRE(ag.n_blocks() == g.n_vertices());
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
      CHECK(ag.internal[v] == 0);
      const auto nb = ag.neighbors(v);
      REQUIRE(nb.size() == g.degree(v));
      for (std::size_t i = 0; i < nb.size(); ++i) {
        CHECK(nb[i] == g.neighbors(v)[i]);
        CHECK(ag.weights(v)[i] == 1);
      }
    }
  }

  TEST_CASE("aggregate of a single cluster") {
    std::mt19937_64 rng(6);
    const auto g = testkit::random_bipartite(rng, 6, 6, 0.5).graph();
    const AggregatedGraph ag = aggregate(g, Partition::single_cluster(g));
    REQUIRE(ag.n_blocks() == 1);
    CHECK(ag.internal[0] == g.edge_count());
    CHECK(ag.doc_degree[0] == g.edge_count());
    CHECK(ag.feature_degree[0] == g.edge_count());
  }

  TEST_CASE("aggregate conserves L and its modularity is exact") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
      const auto el = testkit::random_bipartite(rng, 3 + t % 10, 4 + t % 7, 0.4);
      if (el.edges.empty()) continue;
      const auto g = el.graph();
      const Partition p(g, testkit::random_labels(rng, g.n_vertices(), 1 + t % 6));
      const AggregatedGraph ag = aggregate(g, p);
      std::uint64_t inter = 0, internal = 0, d1 = 0, d2 = 0;
      for (std::uint32_t b = 0; b < ag.n_blocks(); ++b) {
        for (auto w : ag.weights(b)) inter += w;
        internal += ag.internal[b];
        d1 += ag.doc_degree[b];
        d2 += ag.feature_degree[b];
      }
      CHECK(inter % 2 == 0);
      CHECK(inter / 2 + internal == g.edge_count());
      CHECK(d1 == g.edge_count());
      CHECK(d2 == g.edge_count());
      std::vector<ClusterId> separate(ag.n_blocks());
      for (std::uint32_t b = 0; b < ag.n_blocks(); ++b) separate[b] = b;
      const double lambda = 0.5 + 0.25 * (t % 7);
      const DescentState state(ag, separate, lambda);
      CHECK(state.modularity().total == q_bipartite(g, p, lambda).total);
    }
  }

  TEST_CASE("aggregate rejects a size mismatch") {
    const auto g = testkit::two_bicliques().graph();
    const auto other = testkit::two_bicliques_w5().graph();
    CHECK_THROWS_AS(aggregate(g, Partition::singletons(other)), DataError);
  }
}
