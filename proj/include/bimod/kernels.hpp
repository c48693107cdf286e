#pragma once

// Data-parallel graph kernels. Each OpenMP kernel has a plain serial
// reference with the same contract; tests cross-check the pair and
// bench/ times them against each other.

#include <cstdint>
#include <span>
#include <vector>

#include "bimod/graph.hpp"

namespace bimod::kernels {

struct ClusterAggregates {
  std::vector<std::uint64_t> internal;
  std::vector<std::uint64_t> doc_degree;
  std::vector<std::uint64_t> feature_degree;
  std::vector<std::uint64_t> size;
};

/// Vertices grouped by cluster (counting sort); members of cluster c are
/// members[offsets[c]..offsets[c+1]) in increasing vertex order.
struct ClusterMembers {
  std::vector<std::uint64_t> offsets;
  std::vector<VertexId> members;
};

ClusterMembers group_by_cluster(std::span<const ClusterId> assign, std::size_t n_clusters);

// `assign` must hold ids in [0, n_clusters).
ClusterAggregates cluster_aggregates(const BipartiteGraph& g, std::span<const ClusterId> assign,
                                     std::size_t n_clusters);
ClusterAggregates cluster_aggregates_serial(const BipartiteGraph& g,
                                            std::span<const ClusterId> assign,
                                            std::size_t n_clusters);

AggregatedGraph quotient(const BipartiteGraph& g, std::span<const ClusterId> assign,
                         std::size_t n_clusters);
AggregatedGraph quotient_serial(const BipartiteGraph& g, std::span<const ClusterId> assign,
                                std::size_t n_clusters);

}  // namespace bimod::kernels
