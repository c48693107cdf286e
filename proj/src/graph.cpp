#include "bimod/graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "bimod/error.hpp"
#include "bimod/kernels.hpp"

namespace bimod {

BipartiteGraph BipartiteGraph::from_edges(
    std::size_t n_docs, std::size_t n_features,
    std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
    std::vector<std::string> labels) {
  const std::size_t n = n_docs + n_features;
  if (!labels.empty() && labels.size() != n) {
    throw DataError("graph: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(n) + " vertices");
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted(edges.begin(), edges.end());
  for (const auto& [d, f] : sorted) {
    if (d >= n_docs || f >= n_features) {
      throw DataError("graph: edge (" + std::to_string(d) + ", " + std::to_string(f) +
                      ") out of range");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  BipartiteGraph g;
  g.n_docs_ = n_docs;
  g.n_features_ = n_features;
  g.labels_ = std::move(labels);
  g.offsets_.assign(n + 1, 0);
  for (const auto& [d, f] : sorted) {
    ++g.offsets_[d + 1];
    ++g.offsets_[n_docs + f + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adjacency_.resize(2 * sorted.size());
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (doc, feature), so both row kinds come out sorted.
  for (const auto& [d, f] : sorted) {
    const auto fv = static_cast<VertexId>(n_docs + f);
    g.adjacency_[cursor[d]++] = fv;
    g.adjacency_[cursor[fv]++] = d;
  }
  return g;
}

std::string BipartiteGraph::label(VertexId v) const {
  if (!labels_.empty()) return labels_[v];
  return is_doc(v) ? "d" + std::to_string(v) : "f" + std::to_string(v - n_docs_);
}

void BipartiteGraph::check() const {
  std::uint64_t doc_sum = 0, feature_sum = 0;
  for (VertexId v = 0; v < n_vertices(); ++v) {
    const auto row = neighbors(v);
    if (!std::is_sorted(row.begin(), row.end())) throw InvariantError("graph: unsorted row");
    for (VertexId u : row) {
      if (u >= n_vertices() || is_doc(u) == is_doc(v)) {
        throw InvariantError("graph: edge within one side");
      }
      const auto back = neighbors(u);
      if (!std::binary_search(back.begin(), back.end(), v)) {
        throw InvariantError("graph: asymmetric adjacency");
      }
    }
    (is_doc(v) ? doc_sum : feature_sum) += degree(v);
  }
  if (doc_sum != edge_count() || feature_sum != edge_count()) {
    throw InvariantError("graph: side degree sums differ from L");
  }
}

std::vector<ClusterId> canonical_labels(std::span<const ClusterId> labels) {
  std::unordered_map<ClusterId, ClusterId> renumber;
  std::vector<ClusterId> out;
  out.reserve(labels.size());
  for (ClusterId c : labels) {
    auto [it, inserted] = renumber.try_emplace(c, static_cast<ClusterId>(renumber.size()));
    out.push_back(it->second);
  }
  return out;
}

Partition::Partition(const BipartiteGraph& g, std::span<const ClusterId> labels) {
  if (labels.size() != g.n_vertices()) {
    throw DataError("partition: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(g.n_vertices()) + " vertices");
  }
  // Compact to dense ids, keeping the relative order of the given ids.
  std::vector<ClusterId> ids(labels.begin(), labels.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const bool dense = ids.empty() || ids.back() + 1 == ids.size();
  assign_.assign(labels.begin(), labels.end());
  if (!dense) {
    for (auto& c : assign_) {
      c = static_cast<ClusterId>(std::lower_bound(ids.begin(), ids.end(), c) - ids.begin());
    }
  }
  auto agg = kernels::cluster_aggregates(g, assign_, ids.size());
  internal_ = std::move(agg.internal);
  doc_degree_ = std::move(agg.doc_degree);
  feature_degree_ = std::move(agg.feature_degree);
  size_ = std::move(agg.size);
}

Partition Partition::singletons(const BipartiteGraph& g) {
  std::vector<ClusterId> labels(g.n_vertices());
  std::iota(labels.begin(), labels.end(), ClusterId{0});
  return Partition(g, labels);
}

Partition Partition::single_cluster(const BipartiteGraph& g) {
  const std::vector<ClusterId> labels(g.n_vertices(), 0);
  return Partition(g, labels);
}

bool Partition::is_canonical() const {
  ClusterId next = 0;
  for (ClusterId c : assign_) {
    if (c > next) return false;
    if (c == next) ++next;
  }
  return true;
}

void Partition::check(const BipartiteGraph& g) const {
  if (assign_.size() != g.n_vertices()) throw InvariantError("partition: size mismatch");
  const auto ref = kernels::cluster_aggregates_serial(g, assign_, n_clusters());
  if (ref.internal != internal_ || ref.doc_degree != doc_degree_ ||
      ref.feature_degree != feature_degree_ || ref.size != size_) {
    throw InvariantError("partition: aggregates inconsistent with assignment");
  }
  for (auto s : size_) {
    if (s == 0) throw InvariantError("partition: empty cluster id");
  }
  const auto total = [](const std::vector<std::uint64_t>& v) {
    return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
  };
  if (total(doc_degree_) != g.edge_count() || total(feature_degree_) != g.edge_count() ||
      total(internal_) > g.edge_count() || total(size_) != g.n_vertices()) {
    throw InvariantError("partition: aggregate totals violate L / |V| identities");
  }
}

Partition canonicalize(const BipartiteGraph& g, std::span<const ClusterId> labels) {
  return Partition(g, canonical_labels(labels));
}

Partition canonicalize(const BipartiteGraph& g, const Partition& p) {
  return canonicalize(g, p.assignment());
}

bool is_coarsening(const Partition& coarse, const Partition& fine) {
  if (coarse.n_vertices() != fine.n_vertices()) return false;
  std::vector<ClusterId> image(fine.n_clusters(), static_cast<ClusterId>(-1));
  for (VertexId v = 0; v < fine.n_vertices(); ++v) {
    auto& slot = image[fine.cluster_of(v)];
    if (slot == static_cast<ClusterId>(-1)) {
      slot = coarse.cluster_of(v);
    } else if (slot != coarse.cluster_of(v)) {
      return false;
    }
  }
  return true;
}

AggregatedGraph aggregate(const BipartiteGraph& g, const Partition& p) {
  if (p.n_vertices() != g.n_vertices()) {
    throw DataError("aggregate: partition covers " + std::to_string(p.n_vertices()) +
                    " vertices, graph has " + std::to_string(g.n_vertices()));
  }
  return kernels::quotient(g, p.assignment(), p.n_clusters());
}

}  // namespace bimod
