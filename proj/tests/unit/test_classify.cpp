#include <doctest.h>

#include <random>

#include "bimod/classify.hpp"
#include "bimod/error.hpp"
#include "testkit.hpp"

using namespace bimod;

TEST_SUITE("classify") {
  TEST_CASE("two bicliques with one seed per class") {
    const auto el = testkit::two_bicliques();
    const auto g = el.graph();
    TrainingAssignment train;
    train.class_names = {"A", "B"};
    train.seeds = {{0, 0}, {2, 1}};
    const auto r = classify(g, train, DescentConfig{});
    CHECK(r.vertex_class[1] == 0);  // d2 -> A
    CHECK(r.vertex_class[3] == 1);  // d4 -> B
    CHECK(r.partition.n_clusters() == 2);

    // Exhaustive check over every assignment of the six astray vertices.
    double best = -1.0;
    std::vector<ClusterId> best_labels;
    for (unsigned mask = 0; mask < 64; ++mask) {
      std::vector<ClusterId> labels = {0, 0, 1, 0, 0, 0, 0, 0};
      const VertexId astray[] = {1, 3, 4, 5, 6, 7};
      for (int i = 0; i < 6; ++i) labels[astray[i]] = (mask >> i) & 1u;
      const double q = testkit::oracle_q_bipartite(el, labels, 1.0);
      if (q > best) {
        best = q;
        best_labels = labels;
      }
    }
    CHECK(best_labels[1] == 0);
    CHECK(best_labels[3] == 1);
  }

  TEST_CASE("training vertices keep their class, all other vertices get one") {
    std::mt19937_64 rng(31);
    testkit::TopicModel m;
    m.topic_mix = 0.6;
    const auto g = testkit::synthetic_graph(m, 150, 9);
    for (bool final_pass : {false, true}) {
      TrainingAssignment train;
      train.class_names = {"a", "b", "c"};
      std::uniform_int_distribution<std::uint32_t> cls(0, 2);
      for (VertexId d = 0; d < 150; d += 3) train.seeds.emplace_back(d, d / 3 % 3);
      ClassifyOptions opt;
      opt.final_vertex_pass = final_pass;
      const auto r = classify(g, train, DescentConfig{}, opt);
      CHECK(r.partition.n_clusters() == 3);
      for (const auto& [v, c] : train.seeds) CHECK(r.vertex_class[v] == c);
      for (VertexId v = 0; v < g.n_vertices(); ++v) {
        CHECK(r.vertex_class[v] < 3);
        CHECK(r.partition.cluster_of(v) == r.vertex_class[v]);
      }
    }
  }

  TEST_CASE("all documents in training: labels come back unchanged") {
    const auto g = testkit::synthetic_graph({}, 60, 4);
    TrainingAssignment train;
    train.class_names = {"x", "y"};
    for (VertexId d = 0; d < 60; ++d) train.seeds.emplace_back(d, d % 2);
    const auto r = classify(g, train, DescentConfig{});
    for (VertexId d = 0; d < 60; ++d) CHECK(r.vertex_class[d] == d % 2);
  }

  TEST_CASE("an unrelated isolated vertex changes no other label") {
    testkit::TopicModel m;
    const auto base = testkit::synthetic_graph(m, 80, 12);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (VertexId d = 0; d < base.n_docs(); ++d) {
      for (VertexId f : base.neighbors(d)) edges.emplace_back(d, f - static_cast<VertexId>(base.n_docs()));
    }
    const auto g1 = BipartiteGraph::from_edges(base.n_docs(), base.n_features(), edges);
    const auto g2 = BipartiteGraph::from_edges(base.n_docs(), base.n_features() + 1, edges);
    TrainingAssignment train;
    train.class_names = {"a", "b", "c", "d"};
    for (VertexId d = 0; d < 40; ++d) train.seeds.emplace_back(d, d % 4);
    const auto r1 = classify(g1, train, DescentConfig{});
    const auto r2 = classify(g2, train, DescentConfig{});
    for (VertexId v = 0; v < g1.n_vertices(); ++v) CHECK(r1.vertex_class[v] == r2.vertex_class[v]);
    const VertexId extra = static_cast<VertexId>(g2.n_vertices() - 1);
    CHECK(std::find(r2.isolated.begin(), r2.isolated.end(), extra) != r2.isolated.end());
  }

  TEST_CASE("deterministic") {
    const auto g = testkit::synthetic_graph({}, 100, 2);
    TrainingAssignment train;
    train.class_names = {"a", "b"};
    for (VertexId d = 0; d < 30; ++d) train.seeds.emplace_back(d, d % 2);
    DescentConfig cfg;
    cfg.seed = 77;
    CHECK(classify(g, train, cfg).vertex_class == classify(g, train, cfg).vertex_class);
  }

  TEST_CASE("invalid training assignments") {
    const auto g = testkit::two_bicliques().graph();
    TrainingAssignment train;
    train.class_names = {"A", "B"};
    train.seeds = {{0, 0}};
    CHECK_THROWS_AS(classify(g, train, DescentConfig{}), DataError);  // B has no vertex
    train.seeds = {{0, 0}, {99, 1}};
    CHECK_THROWS_AS(classify(g, train, DescentConfig{}), DataError);
    train.seeds = {{0, 0}, {1, 5}};
    CHECK_THROWS_AS(classify(g, train, DescentConfig{}), DataError);
    train.seeds = {{0, 0}, {0, 1}};
    CHECK_THROWS_AS(classify(g, train, DescentConfig{}), DataError);
  }

  TEST_CASE("word seeds are constrained like documents") {
    const auto g = testkit::two_bicliques().graph();
    TrainingAssignment train;
    train.class_names = {"A", "B"};
    train.seeds = {{4, 0}, {6, 1}};  // w1 -> A, w3 -> B
    const auto r = classify(g, train, DescentConfig{});
    CHECK(r.vertex_class[0] == 0);
    CHECK(r.vertex_class[1] == 0);
    CHECK(r.vertex_class[2] == 1);
    CHECK(r.vertex_class[3] == 1);
  }
}
