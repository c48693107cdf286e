#include "bimod/classify.hpp"

#include <numeric>

#include "bimod/error.hpp"

namespace bimod {

void TrainingAssignment::validate(const BipartiteGraph& g) const {
  std::vector<std::uint32_t> owner(g.n_vertices(), static_cast<std::uint32_t>(-1));
  std::vector<std::size_t> per_class(n_classes(), 0);
  for (const auto& [v, c] : seeds) {
    if (v >= g.n_vertices()) {
      throw DataError("training vertex " + std::to_string(v) + " is not in the graph");
    }
    if (c >= n_classes()) throw DataError("training class index " + std::to_string(c) + " out of range");
    if (owner[v] != static_cast<std::uint32_t>(-1) && owner[v] != c) {
      throw DataError("training vertex " + g.label(v) + " assigned to two classes");
    }
    owner[v] = c;
    ++per_class[c];
  }
  for (std::size_t c = 0; c < n_classes(); ++c) {
    if (per_class[c] == 0) throw DataError("class '" + class_names[c] + "' has no training vertex");
  }
}

Classification classify(const BipartiteGraph& g, const TrainingAssignment& train,
                        const DescentConfig& cfg, const ClassifyOptions& options) {
  train.validate(g);
  const std::size_t n = train.n_classes();
  constexpr auto kUnset = static_cast<ClusterId>(-1);

  std::vector<ClusterId> labels(g.n_vertices(), kUnset);
  for (const auto& [v, c] : train.seeds) labels[v] = c;
  ClusterId next = static_cast<ClusterId>(n);
  for (auto& l : labels) {
    if (l == kUnset) l = next++;
  }
  const Partition start(g, labels);
  std::vector<ClusterId> anchors(n);
  std::iota(anchors.begin(), anchors.end(), ClusterId{0});

  Redistribution r = redistribute(g, start, n, std::move(anchors), cfg);
  Classification out;
  out.isolated = std::move(r.isolated);
  out.vertex_class.assign(r.partition.assignment().begin(), r.partition.assignment().end());

  if (options.final_vertex_pass) {
    DescentConfig vertex_cfg = cfg;
    vertex_cfg.allow_fresh = false;
    const Partition refined = local_descent(g, Partition::singletons(g), r.partition, vertex_cfg);
    std::vector<std::vector<std::uint64_t>> votes(refined.n_clusters(), std::vector<std::uint64_t>(n, 0));
    for (VertexId v = 0; v < g.n_vertices(); ++v) ++votes[refined.cluster_of(v)][out.vertex_class[v]];
    std::vector<std::uint32_t> cluster_class(refined.n_clusters(), 0);
    for (std::size_t c = 0; c < votes.size(); ++c) {
      for (std::uint32_t k = 1; k < n; ++k) {
        if (votes[c][k] > votes[c][cluster_class[c]]) cluster_class[c] = k;
      }
    }
    for (VertexId v = 0; v < g.n_vertices(); ++v) out.vertex_class[v] = cluster_class[refined.cluster_of(v)];
    // Training vertices keep their class, which also keeps every class non-empty.
    for (const auto& [v, c] : train.seeds) out.vertex_class[v] = c;
    out.partition = Partition(g, out.vertex_class);
  } else {
    out.partition = std::move(r.partition);
  }
  return out;
}

}  // namespace bimod
