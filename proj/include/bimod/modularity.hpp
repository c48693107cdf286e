#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bimod/graph.hpp"

namespace bimod {

/// A modularity value split into its edge term and its (lambda-scaled) null term.
struct ModularityValue {
  double total = 0.0;
  double edge_term = 0.0;
  double null_term = 0.0;
};

enum class Schedule { kLouvain, kInterleaved };

class DescentState;

struct DescentConfig {
  double lambda = 1.0;
  /// Minimum gain for a move to be accepted; also the round-over-round stop
  /// threshold of the schedules.
  double epsilon = 1e-12;
  std::uint64_t max_sweeps = std::numeric_limits<std::uint64_t>::max();
  /// 0 keeps natural block order; anything else reshuffles each sweep.
  std::uint64_t seed = 0;
  Schedule schedule = Schedule::kInterleaved;
  /// Whether a block may leave for an empty cluster during local descent.
  /// When false, every non-empty cluster is a candidate, not only adjacent
  /// ones; meant for runs with few clusters such as finalize().
  bool allow_fresh = true;
  /// Called after every accepted move. Testing hook.
  std::function<void(const DescentState&)> on_move;

  /// Throws UsageError unless lambda > 0 and epsilon >= 0.
  void validate() const;
};

/// Undirected weighted graph without bipartite structure.
struct SimpleGraph {
  struct Edge {
    VertexId u;
    VertexId v;
    double weight = 1.0;
  };
  std::size_t n_vertices = 0;
  std::vector<Edge> edges;
};

/// Sum over clusters of l/L - lambda * D^2 / (4 L^2). Throws DataError when L = 0.
ModularityValue q_simple(const SimpleGraph& g, std::span<const ClusterId> labels, double lambda);

/// Sum over clusters of l/L - lambda * D1 * D2 / L^2. Throws DataError when L = 0.
ModularityValue q_bipartite(const BipartiteGraph& g, const Partition& p, double lambda);

/**
 * Mutable assignment of the blocks of an AggregatedGraph to clusters, with
 * cached per-cluster (l, D1, D2) and exact integer running sums so that the
 * cached modularity never drifts.
 *
 * Cluster ids live in [0, n_blocks); ids not currently used are empty
 * clusters and serve as fresh targets.
 */
class DescentState {
 public:
  static constexpr ClusterId kNone = std::numeric_limits<ClusterId>::max();

  /// `block_cluster[b]` must be < ag.n_blocks().
  DescentState(const AggregatedGraph& ag, std::vector<ClusterId> block_cluster, double lambda);

  const AggregatedGraph& graph() const { return *graph_; }
  std::size_t n_blocks() const { return cluster_.size(); }
  ClusterId cluster_of(std::uint32_t block) const { return cluster_[block]; }
  std::span<const ClusterId> block_clusters() const { return cluster_; }
  bool is_empty(ClusterId c) const { return members_[c] == 0; }
  /// Number of blocks currently in cluster c.
  std::uint64_t block_count(ClusterId c) const { return members_[c]; }
  std::uint64_t internal_edges(ClusterId c) const { return internal_[c]; }
  std::uint64_t doc_degree(ClusterId c) const { return doc_degree_[c]; }
  std::uint64_t feature_degree(ClusterId c) const { return feature_degree_[c]; }

  /// An empty cluster id, or kNone when every id is in use.
  ClusterId fresh_cluster() const { return free_.empty() ? kNone : free_.back(); }

  /// Q_after - Q_before for moving `block` into `target` (an empty id means
  /// a fresh cluster). O(degree of block). Throws DataError on an id out of range.
  double gain(std::uint32_t block, ClusterId target) const;
  void move(std::uint32_t block, ClusterId target);

  ModularityValue modularity() const;
  /// Cluster of every base vertex.
  std::vector<ClusterId> base_labels() const;

  /// Edge weight from `block` to each cluster its neighbors sit in, its own
  /// cluster included. Valid until the next call.
  std::span<const std::pair<ClusterId, std::uint64_t>> neighbor_clusters(std::uint32_t block) const;

  /// Gain of moving `block` to `target` given precomputed edge weights to
  /// the target (`to_target`) and to the rest of its current cluster (`to_rest`).
  double gain_with(std::uint32_t block, ClusterId target, std::uint64_t to_target,
                   std::uint64_t to_rest) const;

 private:
  const AggregatedGraph* graph_;
  double lambda_;
  double inv_l_;
  double inv_l2_;
  std::vector<ClusterId> cluster_;
  std::vector<std::uint64_t> internal_;
  std::vector<std::uint64_t> doc_degree_;
  std::vector<std::uint64_t> feature_degree_;
  std::vector<std::uint64_t> members_;
  std::vector<ClusterId> free_;
  std::uint64_t sum_internal_ = 0;
  std::uint64_t sum_d1d2_ = 0;
  mutable std::vector<std::uint64_t> scratch_weight_;
  mutable std::vector<std::pair<ClusterId, std::uint64_t>> scratch_rows_;
};

/// Gain of moving `block` of the state into `target`.
double move_gain(const DescentState& state, std::uint32_t block, ClusterId target);

/// Cyclic coordinate descent over the blocks until a full sweep makes no
/// move. Returns the number of accepted moves.
std::uint64_t run_descent(DescentState& state, const DescentConfig& cfg);

/// T_base applied to `start`: moves whole blocks of `base` between clusters.
/// `start` must be a coarsening of `base` (DataError otherwise). Result is canonical.
Partition local_descent(const BipartiteGraph& g, const Partition& base, const Partition& start,
                        const DescentConfig& cfg);

struct ClusterResult {
  Partition partition;
  ModularityValue modularity;
  std::uint32_t rounds = 0;
};

/// Full clustering from singletons under the configured schedule.
ClusterResult cluster(const BipartiteGraph& g, const DescentConfig& cfg);

struct Redistribution {
  /// Exactly n clusters; cluster k holds anchor k plus the vertices sent to it.
  Partition partition;
  /// Input cluster id of each anchor, in output order.
  std::vector<ClusterId> anchors;
  /// Astray vertices with no edges; placed by the largest-D1 rule.
  std::vector<VertexId> isolated;
};

/// Dissolves every cluster except n anchors and sends the astray vertices to
/// anchors: greedy placement in descending-degree order, then cyclic descent
/// over the astray vertices. Without explicit anchors the n largest clusters
/// are used. Anchor members never move.
Redistribution redistribute(const BipartiteGraph& g, const Partition& p, std::size_t n,
                            std::optional<std::vector<ClusterId>> anchors,
                            const DescentConfig& cfg);

/// Vertex-level descent started from redistribute(g, p, n). Vertices only
/// move between the n redistributed clusters, so the count can only drop.
Partition finalize(const BipartiteGraph& g, const Partition& p, std::size_t n,
                   const DescentConfig& cfg);

}  // namespace bimod
