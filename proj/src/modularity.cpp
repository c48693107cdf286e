#include "bimod/modularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "bimod/error.hpp"

namespace bimod {

void DescentConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw UsageError("lambda must be a positive finite number, got " + std::to_string(lambda));
  }
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
}

namespace {

ModularityValue make_value(double edge_term, double raw_null, double lambda) {
  ModularityValue q;
  q.edge_term = edge_term;
  q.null_term = lambda * raw_null;
  q.total = q.edge_term - q.null_term;
  return q;
}

// Both the cached and the from-scratch paths go through this so that they
// agree bit for bit.
ModularityValue bipartite_value(std::uint64_t sum_internal, std::uint64_t sum_d1d2,
                                std::uint64_t edges, double lambda) {
  const auto l = static_cast<double>(edges);
  return make_value(static_cast<double>(sum_internal) / l,
                    static_cast<double>(sum_d1d2) / (l * l), lambda);
}

}  // namespace

ModularityValue q_simple(const SimpleGraph& g, std::span<const ClusterId> labels, double lambda) {
  if (labels.size() != g.n_vertices) {
    throw DataError("q_simple: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(g.n_vertices) + " vertices");
  }
  const ClusterId k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> inside(k, 0.0), degree(k, 0.0);
  double total = 0.0;
  for (const auto& e : g.edges) {
    if (e.u >= g.n_vertices || e.v >= g.n_vertices) throw DataError("q_simple: edge out of range");
    total += e.weight;
    degree[labels[e.u]] += e.weight;
    degree[labels[e.v]] += e.weight;
    if (labels[e.u] == labels[e.v]) inside[labels[e.u]] += e.weight;
  }
  if (total <= 0.0) throw DataError("q_simple: graph has no edges (L = 0)");
  double edge_sum = 0.0, null_sum = 0.0;
  for (ClusterId c = 0; c < k; ++c) {
    edge_sum += inside[c];
    null_sum += degree[c] * degree[c];
  }
  return make_value(edge_sum / total, null_sum / (4.0 * total * total), lambda);
}

ModularityValue q_bipartite(const BipartiteGraph& g, const Partition& p, double lambda) {
  if (p.n_vertices() != g.n_vertices()) throw DataError("q_bipartite: partition/graph size mismatch");
  if (g.edge_count() == 0) throw DataError("q_bipartite: graph has no edges (L = 0)");
  std::uint64_t sum_internal = 0, sum_d1d2 = 0;
  for (ClusterId c = 0; c < p.n_clusters(); ++c) {
    sum_internal += p.internal_edges(c);
    sum_d1d2 += p.doc_degree(c) * p.feature_degree(c);
  }
  return bipartite_value(sum_internal, sum_d1d2, g.edge_count(), lambda);
}

DescentState::DescentState(const AggregatedGraph& ag, std::vector<ClusterId> block_cluster,
                           double lambda)
    : graph_(&ag), lambda_(lambda), cluster_(std::move(block_cluster)) {
  if (ag.total_edges == 0) throw DataError("descent: graph has no edges (L = 0)");
  const std::size_t n = ag.n_blocks();
  if (cluster_.size() != n) throw DataError("descent: block assignment size mismatch");
  const auto l = static_cast<double>(ag.total_edges);
  inv_l_ = 1.0 / l;
  inv_l2_ = 1.0 / (l * l);

  internal_.assign(n, 0);
  doc_degree_.assign(n, 0);
  feature_degree_.assign(n, 0);
  members_.assign(n, 0);
  scratch_weight_.assign(n, 0);
  std::vector<std::uint64_t> between(n, 0);
  for (std::uint32_t b = 0; b < n; ++b) {
    const ClusterId c = cluster_[b];
    if (c >= n) throw DataError("descent: cluster id " + std::to_string(c) + " out of range");
    internal_[c] += ag.internal[b];
    doc_degree_[c] += ag.doc_degree[b];
    feature_degree_[c] += ag.feature_degree[b];
    ++members_[c];
  }
  for (std::uint32_t b = 0; b < n; ++b) {
    const auto nbrs = ag.neighbors(b);
    const auto ws = ag.weights(b);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (cluster_[nbrs[k]] == cluster_[b]) between[cluster_[b]] += ws[k];
    }
  }
  for (ClusterId c = 0; c < n; ++c) {
    internal_[c] += between[c] / 2;
    sum_internal_ += internal_[c];
    sum_d1d2_ += doc_degree_[c] * feature_degree_[c];
  }
  for (ClusterId c = static_cast<ClusterId>(n); c-- > 0;) {
    if (members_[c] == 0) free_.push_back(c);
  }
}

std::span<const std::pair<ClusterId, std::uint64_t>> DescentState::neighbor_clusters(
    std::uint32_t block) const {
  scratch_rows_.clear();
  const auto nbrs = graph_->neighbors(block);
  const auto ws = graph_->weights(block);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const ClusterId c = cluster_[nbrs[k]];
    if (scratch_weight_[c] == 0) scratch_rows_.emplace_back(c, 0);
    scratch_weight_[c] += ws[k];
  }
  for (auto& [c, w] : scratch_rows_) {
    w = scratch_weight_[c];
    scratch_weight_[c] = 0;
  }
  return scratch_rows_;
}

double DescentState::gain_with(std::uint32_t block, ClusterId target, std::uint64_t to_target,
                               std::uint64_t to_rest) const {
  const ClusterId current = cluster_[block];
  if (target == current) return 0.0;
  const auto d1 = static_cast<std::int64_t>(graph_->doc_degree[block]);
  const auto d2 = static_cast<std::int64_t>(graph_->feature_degree[block]);
  const auto rest_d1 = static_cast<std::int64_t>(doc_degree_[current]) - d1;
  const auto rest_d2 = static_cast<std::int64_t>(feature_degree_[current]) - d2;
  const auto target_d1 = static_cast<std::int64_t>(doc_degree_[target]);
  const auto target_d2 = static_cast<std::int64_t>(feature_degree_[target]);
  const std::int64_t edge_diff =
      static_cast<std::int64_t>(to_target) - static_cast<std::int64_t>(to_rest);
  const std::int64_t null_diff = d1 * (target_d2 - rest_d2) + d2 * (target_d1 - rest_d1);
  return static_cast<double>(edge_diff) * inv_l_ -
         lambda_ * static_cast<double>(null_diff) * inv_l2_;
}

double DescentState::gain(std::uint32_t block, ClusterId target) const {
  if (block >= n_blocks()) throw DataError("move_gain: unknown block " + std::to_string(block));
  if (target >= n_blocks()) throw DataError("move_gain: unknown cluster " + std::to_string(target));
  const ClusterId current = cluster_[block];
  std::uint64_t to_target = 0, to_rest = 0;
  const auto nbrs = graph_->neighbors(block);
  const auto ws = graph_->weights(block);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const ClusterId c = cluster_[nbrs[k]];
    if (c == target) to_target += ws[k];
    if (c == current) to_rest += ws[k];
  }
  return gain_with(block, target, to_target, to_rest);
}

void DescentState::move(std::uint32_t block, ClusterId target) {
  if (block >= n_blocks()) throw DataError("move: unknown block " + std::to_string(block));
  if (target >= n_blocks()) throw DataError("move: unknown cluster " + std::to_string(target));
  const ClusterId current = cluster_[block];
  if (target == current) return;
  std::uint64_t to_target = 0, to_rest = 0;
  const auto nbrs = graph_->neighbors(block);
  const auto ws = graph_->weights(block);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const ClusterId c = cluster_[nbrs[k]];
    if (c == target) to_target += ws[k];
    if (c == current) to_rest += ws[k];
  }
  if (members_[target] == 0) {
    // fresh_cluster() hands out the back of the free list.
    if (free_.back() == target) {
      free_.pop_back();
    } else {
      free_.erase(std::find(free_.begin(), free_.end(), target));
    }
  }

  sum_d1d2_ -= doc_degree_[current] * feature_degree_[current] +
               doc_degree_[target] * feature_degree_[target];
  const std::uint64_t own = graph_->internal[block];
  internal_[current] -= own + to_rest;
  internal_[target] += own + to_target;
  sum_internal_ = sum_internal_ + to_target - to_rest;
  doc_degree_[current] -= graph_->doc_degree[block];
  feature_degree_[current] -= graph_->feature_degree[block];
  doc_degree_[target] += graph_->doc_degree[block];
  feature_degree_[target] += graph_->feature_degree[block];
  sum_d1d2_ += doc_degree_[current] * feature_degree_[current] +
               doc_degree_[target] * feature_degree_[target];
  --members_[current];
  ++members_[target];
  cluster_[block] = target;
  if (members_[current] == 0) free_.push_back(current);
}

ModularityValue DescentState::modularity() const {
  return bipartite_value(sum_internal_, sum_d1d2_, graph_->total_edges, lambda_);
}

std::vector<ClusterId> DescentState::base_labels() const {
  std::vector<ClusterId> labels(graph_->block_of.size());
  for (std::size_t v = 0; v < labels.size(); ++v) labels[v] = cluster_[graph_->block_of[v]];
  return labels;
}

double move_gain(const DescentState& state, std::uint32_t block, ClusterId target) {
  return state.gain(block, target);
}

std::uint64_t run_descent(DescentState& state, const DescentConfig& cfg) {
  std::vector<std::uint32_t> order(state.n_blocks());
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(cfg.seed);
  std::uint64_t moves = 0;

  // Without a fresh cluster to escape to, a non-adjacent cluster can be the
  // best target, so every cluster alive at the start is a candidate. No
  // cluster is created in this mode, so the list only loses members.
  std::vector<ClusterId> alive;
  std::vector<std::uint64_t> stamp;
  if (!cfg.allow_fresh) {
    for (ClusterId c = 0; c < state.n_blocks(); ++c) {
      if (!state.is_empty(c)) alive.push_back(c);
    }
    stamp.assign(state.n_blocks(), 0);
  }
  std::uint64_t visit = 0;

  for (std::uint64_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    if (cfg.seed != 0) std::shuffle(order.begin(), order.end(), rng);
    std::uint64_t moved = 0;
    for (std::uint32_t b : order) {
      const ClusterId current = state.cluster_of(b);
      const auto rows = state.neighbor_clusters(b);
      std::uint64_t to_rest = 0;
      for (const auto& [c, w] : rows) {
        if (c == current) to_rest = w;
      }
      ClusterId best = DescentState::kNone;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (const auto& [c, w] : rows) {
        if (c == current) continue;
        const double gain = state.gain_with(b, c, w, to_rest);
        if (gain > best_gain || (gain == best_gain && c < best)) {
          best = c;
          best_gain = gain;
        }
      }
      if (!cfg.allow_fresh) {
        ++visit;
        for (const auto& [c, w] : rows) stamp[c] = visit;
        for (ClusterId c : alive) {
          if (c == current || stamp[c] == visit || state.is_empty(c)) continue;
          const double gain = state.gain_with(b, c, 0, to_rest);
          if (gain > best_gain || (gain == best_gain && c < best)) {
            best = c;
            best_gain = gain;
          }
        }
      }
      if (cfg.allow_fresh && state.block_count(current) > 1) {
        const ClusterId fresh = state.fresh_cluster();
        if (fresh != DescentState::kNone) {
          const double gain = state.gain_with(b, fresh, 0, to_rest);
          if (gain > best_gain) {
            best = fresh;
            best_gain = gain;
          }
        }
      }
      if (best != DescentState::kNone && best_gain > cfg.epsilon) {
        state.move(b, best);
        ++moved;
        if (cfg.on_move) cfg.on_move(state);
      }
    }
    moves += moved;
    if (moved == 0) break;
  }
  return moves;
}

Partition local_descent(const BipartiteGraph& g, const Partition& base, const Partition& start,
                        const DescentConfig& cfg) {
  cfg.validate();
  if (base.n_vertices() != g.n_vertices() || start.n_vertices() != g.n_vertices()) {
    throw DataError("local_descent: partition/graph size mismatch");
  }
  if (!is_coarsening(start, base)) {
    throw DataError("local_descent: start partition is not a coarsening of the base partition");
  }
  const AggregatedGraph ag = aggregate(g, base);
  std::vector<ClusterId> block_cluster(ag.n_blocks());
  for (VertexId v = 0; v < g.n_vertices(); ++v) block_cluster[ag.block_of[v]] = start.cluster_of(v);
  DescentState state(ag, std::move(block_cluster), cfg.lambda);
  run_descent(state, cfg);
  return canonicalize(g, state.base_labels());
}

ClusterResult cluster(const BipartiteGraph& g, const DescentConfig& cfg) {
  cfg.validate();
  if (g.edge_count() == 0) throw DataError("cluster: graph has no edges");
  const Partition finest = Partition::singletons(g);
  ClusterResult result;

  if (cfg.schedule == Schedule::kLouvain) {
    Partition current = finest;
    double q = q_bipartite(g, current, cfg.lambda).total;
    while (true) {
      Partition next = local_descent(g, current, current, cfg);
      const double q_next = q_bipartite(g, next, cfg.lambda).total;
      ++result.rounds;
      current = std::move(next);
      if (q_next - q <= cfg.epsilon) break;
      q = q_next;
    }
    result.partition = std::move(current);
  } else {
    Partition current = local_descent(g, finest, finest, cfg);
    double q = q_bipartite(g, current, cfg.lambda).total;
    result.rounds = 1;
    while (true) {
      const Partition coarse = local_descent(g, current, current, cfg);
      Partition next = local_descent(g, finest, coarse, cfg);
      const double q_next = q_bipartite(g, next, cfg.lambda).total;
      ++result.rounds;
      current = std::move(next);
      if (q_next - q <= cfg.epsilon) break;
      q = q_next;
    }
    result.partition = std::move(current);
  }
  result.modularity = q_bipartite(g, result.partition, cfg.lambda);
  return result;
}

Redistribution redistribute(const BipartiteGraph& g, const Partition& p, std::size_t n,
                            std::optional<std::vector<ClusterId>> anchors,
                            const DescentConfig& cfg) {
  cfg.validate();
  if (n < 1) throw UsageError("redistribute: target cluster count must be >= 1");
  if (p.n_vertices() != g.n_vertices()) throw DataError("redistribute: partition/graph size mismatch");

  Redistribution out;
  if (anchors) {
    if (anchors->size() != n) {
      throw DataError("redistribute: " + std::to_string(anchors->size()) + " anchors given for n = " +
                      std::to_string(n));
    }
    std::vector<ClusterId> seen = *anchors;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw DataError("redistribute: duplicate anchor cluster");
    }
    if (!seen.empty() && seen.back() >= p.n_clusters()) {
      throw DataError("redistribute: anchor cluster " + std::to_string(seen.back()) + " does not exist");
    }
    out.anchors = std::move(*anchors);
  } else {
    if (n >= p.n_clusters()) {
      throw DataError("redistribute: partition has " + std::to_string(p.n_clusters()) +
                      " clusters, need more than n = " + std::to_string(n));
    }
    std::vector<ClusterId> by_size(p.n_clusters());
    std::iota(by_size.begin(), by_size.end(), ClusterId{0});
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](ClusterId a, ClusterId b) { return p.size(a) > p.size(b); });
    out.anchors.assign(by_size.begin(), by_size.begin() + static_cast<std::ptrdiff_t>(n));
  }

  std::vector<ClusterId> slot(p.n_clusters(), DescentState::kNone);
  for (std::size_t k = 0; k < n; ++k) slot[out.anchors[k]] = static_cast<ClusterId>(k);

  // Anchors take ids 0..n-1; every astray vertex starts as its own cluster.
  std::vector<ClusterId> labels(g.n_vertices());
  std::vector<VertexId> astray;
  for (VertexId v = 0; v < g.n_vertices(); ++v) {
    const ClusterId s = slot[p.cluster_of(v)];
    if (s != DescentState::kNone) {
      labels[v] = s;
    } else {
      labels[v] = static_cast<ClusterId>(n + astray.size());
      astray.push_back(v);
    }
  }
  std::stable_sort(astray.begin(), astray.end(),
                   [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });

  const AggregatedGraph ag = aggregate(g, Partition::singletons(g));
  DescentState state(ag, std::move(labels), cfg.lambda);
  std::vector<std::uint64_t> to_anchor(n, 0);

  const auto load_weights = [&](VertexId v) {
    std::fill(to_anchor.begin(), to_anchor.end(), 0);
    for (const auto& [c, w] : state.neighbor_clusters(v)) {
      if (c < n) to_anchor[c] = w;
    }
  };

  // Greedy start: each astray vertex joins its best anchor given the ones
  // already placed; the rest remain singletons.
  for (VertexId v : astray) {
    ClusterId best = 0;
    if (g.degree(v) == 0) {
      for (ClusterId k = 1; k < n; ++k) {
        if (state.doc_degree(k) > state.doc_degree(best)) best = k;
      }
      out.isolated.push_back(v);
    } else {
      load_weights(v);
      double best_gain = -std::numeric_limits<double>::infinity();
      for (ClusterId k = 0; k < n; ++k) {
        const double gain = state.gain_with(v, k, to_anchor[k], 0);
        if (gain > best_gain) {
          best = k;
          best_gain = gain;
        }
      }
    }
    state.move(v, best);
    if (cfg.on_move) cfg.on_move(state);
  }
  std::sort(out.isolated.begin(), out.isolated.end());

  std::vector<VertexId> order;
  order.reserve(astray.size());
  for (VertexId v : astray) {
    if (g.degree(v) > 0) order.push_back(v);
  }
  std::mt19937_64 rng(cfg.seed);
  for (std::uint64_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    if (cfg.seed != 0) std::shuffle(order.begin(), order.end(), rng);
    std::uint64_t moved = 0;
    for (VertexId v : order) {
      const ClusterId current = state.cluster_of(v);
      load_weights(v);
      ClusterId best = current;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (ClusterId k = 0; k < n; ++k) {
        if (k == current) continue;
        const double gain = state.gain_with(v, k, to_anchor[k], to_anchor[current]);
        if (gain > best_gain) {
          best = k;
          best_gain = gain;
        }
      }
      if (best != current && best_gain > cfg.epsilon) {
        state.move(v, best);
        ++moved;
        if (cfg.on_move) cfg.on_move(state);
      }
    }
    if (moved == 0) break;
  }

  out.partition = Partition(g, state.base_labels());
  if (out.partition.n_clusters() != n) {
    throw InvariantError("redistribute: produced " + std::to_string(out.partition.n_clusters()) +
                         " clusters instead of " + std::to_string(n));
  }
  return out;
}

Partition finalize(const BipartiteGraph& g, const Partition& p, std::size_t n,
                   const DescentConfig& cfg) {
  const Redistribution r = redistribute(g, p, n, std::nullopt, cfg);
  DescentConfig vertex_cfg = cfg;
  vertex_cfg.allow_fresh = false;
  return local_descent(g, Partition::singletons(g), r.partition, vertex_cfg);
}

}  // namespace bimod
