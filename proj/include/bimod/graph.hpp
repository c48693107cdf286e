#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bimod {

using VertexId = std::uint32_t;
using ClusterId = std::uint32_t;

enum class Side : std::uint8_t { kDoc, kFeature };

/**
 * Immutable document-feature graph in compressed sparse row layout.
 *
 * Vertex ids 0..n_docs-1 are documents, n_docs..n_vertices-1 are features.
 * Every edge joins a document to a feature and has unit weight; each
 * undirected edge appears in both endpoint rows. Neighbor rows are sorted.
 */
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Builds from (document index, feature index) pairs. Duplicate pairs
  /// collapse to one edge. Throws DataError on out-of-range indices or
  /// a label count that does not match the vertex count.
  static BipartiteGraph from_edges(std::size_t n_docs, std::size_t n_features,
                                   std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                                   std::vector<std::string> labels = {});

  std::size_t n_docs() const { return n_docs_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_vertices() const { return n_docs_ + n_features_; }
  /// Number of edges, L.
  std::uint64_t edge_count() const { return adjacency_.size() / 2; }

  bool is_doc(VertexId v) const { return v < n_docs_; }
  Side side(VertexId v) const { return is_doc(v) ? Side::kDoc : Side::kFeature; }
  std::uint32_t degree(VertexId v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  /// Display label; falls back to "d<i>" / "f<i>" when none was supplied.
  std::string label(VertexId v) const;
  bool has_labels() const { return !labels_.empty(); }

  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const VertexId> adjacency() const { return adjacency_; }

  /// Asserts bipartiteness, symmetry and the degree-sum identity.
  /// Throws InvariantError on violation.
  void check() const;

 private:
  std::size_t n_docs_ = 0;
  std::size_t n_features_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  std::vector<std::string> labels_;
};

/// Relabels cluster ids to 0..k-1 in order of first appearance.
std::vector<ClusterId> canonical_labels(std::span<const ClusterId> labels);

/**
 * Cluster assignment over every vertex of a BipartiteGraph together with the
 * per-cluster aggregates of the bipartite modularity: internal edge count l,
 * document-side degree sum D1, feature-side degree sum D2, and vertex count.
 *
 * Ids are always dense (no empty cluster). The constructor keeps the relative
 * order of the supplied ids; canonicalize() additionally renumbers them by
 * first appearance.
 */
class Partition {
 public:
  Partition() = default;
  Partition(const BipartiteGraph& g, std::span<const ClusterId> labels);

  static Partition singletons(const BipartiteGraph& g);
  static Partition single_cluster(const BipartiteGraph& g);

  std::size_t n_vertices() const { return assign_.size(); }
  std::size_t n_clusters() const { return internal_.size(); }
  ClusterId cluster_of(VertexId v) const { return assign_[v]; }
  std::span<const ClusterId> assignment() const { return assign_; }

  std::uint64_t internal_edges(ClusterId c) const { return internal_[c]; }
  std::uint64_t doc_degree(ClusterId c) const { return doc_degree_[c]; }
  std::uint64_t feature_degree(ClusterId c) const { return feature_degree_[c]; }
  std::uint64_t size(ClusterId c) const { return size_[c]; }

  bool is_canonical() const;

  /// Recomputes aggregates from scratch and compares; throws InvariantError.
  void check(const BipartiteGraph& g) const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.assign_ == b.assign_; }

 private:
  std::vector<ClusterId> assign_;
  std::vector<std::uint64_t> internal_;
  std::vector<std::uint64_t> doc_degree_;
  std::vector<std::uint64_t> feature_degree_;
  std::vector<std::uint64_t> size_;
};

Partition canonicalize(const BipartiteGraph& g, std::span<const ClusterId> labels);
Partition canonicalize(const BipartiteGraph& g, const Partition& p);

/// True when every block of `fine` lies inside a single block of `coarse`.
bool is_coarsening(const Partition& coarse, const Partition& fine);

/**
 * Quotient of a BipartiteGraph by a partition: one super-vertex per block.
 *
 * Each super-vertex keeps its document- and feature-side degree sums and its
 * internal edge count; inter-block edges carry the number of base edges
 * between the two blocks. Rows are sorted by neighbor block and exclude the
 * block itself.
 */
struct AggregatedGraph {
  std::uint64_t total_edges = 0;               // L of the base graph
  std::vector<std::uint64_t> doc_degree;       // D1 per block
  std::vector<std::uint64_t> feature_degree;   // D2 per block
  std::vector<std::uint64_t> internal;         // l per block
  std::vector<std::uint64_t> block_size;       // base vertices per block
  std::vector<std::uint64_t> offsets{0};
  std::vector<std::uint32_t> neighbor;
  std::vector<std::uint64_t> weight;
  std::vector<std::uint32_t> block_of;         // base vertex -> block

  std::size_t n_blocks() const { return doc_degree.size(); }
  std::span<const std::uint32_t> neighbors(std::uint32_t b) const {
    return {neighbor.data() + offsets[b], neighbor.data() + offsets[b + 1]};
  }
  std::span<const std::uint64_t> weights(std::uint32_t b) const {
    return {weight.data() + offsets[b], weight.data() + offsets[b + 1]};
  }
};

/// Builds the quotient graph of `g` by `p`. Throws DataError on a vertex
/// count mismatch.
AggregatedGraph aggregate(const BipartiteGraph& g, const Partition& p);

}  // namespace bimod
