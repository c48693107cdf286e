#include "bimod/kernels.hpp"

#include <algorithm>
#include <map>

#include <omp.h>

namespace bimod::kernels {

ClusterMembers group_by_cluster(std::span<const ClusterId> assign, std::size_t n_clusters) {
  ClusterMembers out;
  out.offsets.assign(n_clusters + 1, 0);
  for (ClusterId c : assign) ++out.offsets[c + 1];
  for (std::size_t c = 0; c < n_clusters; ++c) out.offsets[c + 1] += out.offsets[c];
  out.members.resize(assign.size());
  std::vector<std::uint64_t> cursor(out.offsets.begin(), out.offsets.end() - 1);
  for (VertexId v = 0; v < assign.size(); ++v) out.members[cursor[assign[v]]++] = v;
  return out;
}

ClusterAggregates cluster_aggregates(const BipartiteGraph& g, std::span<const ClusterId> assign,
                                     std::size_t n_clusters) {
  ClusterAggregates agg;
  agg.internal.assign(n_clusters, 0);
  agg.doc_degree.assign(n_clusters, 0);
  agg.feature_degree.assign(n_clusters, 0);
  agg.size.assign(n_clusters, 0);
  const ClusterMembers groups = group_by_cluster(assign, n_clusters);
  const auto n = static_cast<std::int64_t>(n_clusters);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t ci = 0; ci < n; ++ci) {
    const auto c = static_cast<ClusterId>(ci);
    std::uint64_t inside = 0, d1 = 0, d2 = 0;
    for (auto k = groups.offsets[c]; k < groups.offsets[c + 1]; ++k) {
      const VertexId v = groups.members[k];
      if (g.is_doc(v)) {
        d1 += g.degree(v);
      } else {
        d2 += g.degree(v);
      }
      for (VertexId u : g.neighbors(v)) inside += (assign[u] == c);
    }
    agg.internal[c] = inside / 2;
    agg.doc_degree[c] = d1;
    agg.feature_degree[c] = d2;
    agg.size[c] = groups.offsets[c + 1] - groups.offsets[c];
  }
  return agg;
}

ClusterAggregates cluster_aggregates_serial(const BipartiteGraph& g,
                                            std::span<const ClusterId> assign,
                                            std::size_t n_clusters) {
  ClusterAggregates agg;
  agg.internal.assign(n_clusters, 0);
  agg.doc_degree.assign(n_clusters, 0);
  agg.feature_degree.assign(n_clusters, 0);
  agg.size.assign(n_clusters, 0);
  for (VertexId v = 0; v < g.n_vertices(); ++v) {
    const ClusterId c = assign[v];
    ++agg.size[c];
    if (g.is_doc(v)) {
      agg.doc_degree[c] += g.degree(v);
      // Count each edge once, from its document end.
      for (VertexId u : g.neighbors(v)) agg.internal[c] += (assign[u] == c);
    } else {
      agg.feature_degree[c] += g.degree(v);
    }
  }
  return agg;
}

AggregatedGraph quotient(const BipartiteGraph& g, std::span<const ClusterId> assign,
                         std::size_t n_clusters) {
  AggregatedGraph ag;
  ag.total_edges = g.edge_count();
  ag.block_of.assign(assign.begin(), assign.end());
  ag.doc_degree.assign(n_clusters, 0);
  ag.feature_degree.assign(n_clusters, 0);
  ag.internal.assign(n_clusters, 0);
  ag.block_size.assign(n_clusters, 0);

  const ClusterMembers groups = group_by_cluster(assign, n_clusters);
  // Each thread appends its rows to one flat buffer; row_at[b] locates row b
  // as (thread, start) and row_len[b] gives its length.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> buffers;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> row_at(n_clusters);
  std::vector<std::uint64_t> row_len(n_clusters, 0);
  const auto n = static_cast<std::int64_t>(n_clusters);

#pragma omp parallel
  {
#pragma omp single
    buffers.resize(static_cast<std::size_t>(omp_get_num_threads()));
    const auto tid = static_cast<std::uint32_t>(omp_get_thread_num());
    auto& buf = buffers[tid];
    std::vector<std::uint64_t> acc(n_clusters, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t bi = 0; bi < n; ++bi) {
      const auto b = static_cast<std::uint32_t>(bi);
      std::uint64_t inside = 0, d1 = 0, d2 = 0;
      for (auto k = groups.offsets[b]; k < groups.offsets[b + 1]; ++k) {
        const VertexId v = groups.members[k];
        if (g.is_doc(v)) {
          d1 += g.degree(v);
        } else {
          d2 += g.degree(v);
        }
        for (VertexId u : g.neighbors(v)) {
          const ClusterId c = assign[u];
          if (c == b) {
            ++inside;
            continue;
          }
          if (acc[c]++ == 0) touched.push_back(c);
        }
      }
      std::sort(touched.begin(), touched.end());
      row_at[b] = {tid, buf.size()};
      row_len[b] = touched.size();
      for (std::uint32_t c : touched) {
        buf.emplace_back(c, acc[c]);
        acc[c] = 0;
      }
      touched.clear();
      ag.internal[b] = inside / 2;
      ag.doc_degree[b] = d1;
      ag.feature_degree[b] = d2;
      ag.block_size[b] = groups.offsets[b + 1] - groups.offsets[b];
    }
  }

  ag.offsets.assign(n_clusters + 1, 0);
  for (std::size_t b = 0; b < n_clusters; ++b) ag.offsets[b + 1] = ag.offsets[b] + row_len[b];
  ag.neighbor.resize(ag.offsets.back());
  ag.weight.resize(ag.offsets.back());
#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < n; ++bi) {
    const auto& buf = buffers[row_at[bi].first];
    const auto from = row_at[bi].second;
    auto pos = ag.offsets[bi];
    for (std::uint64_t i = 0; i < row_len[bi]; ++i, ++pos) {
      ag.neighbor[pos] = buf[from + i].first;
      ag.weight[pos] = buf[from + i].second;
    }
  }
  return ag;
}

AggregatedGraph quotient_serial(const BipartiteGraph& g, std::span<const ClusterId> assign,
                                std::size_t n_clusters) {
  AggregatedGraph ag;
  ag.total_edges = g.edge_count();
  ag.block_of.assign(assign.begin(), assign.end());
  ag.doc_degree.assign(n_clusters, 0);
  ag.feature_degree.assign(n_clusters, 0);
  ag.internal.assign(n_clusters, 0);
  ag.block_size.assign(n_clusters, 0);

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> between;
  for (VertexId v = 0; v < g.n_vertices(); ++v) {
    const ClusterId b = assign[v];
    ++ag.block_size[b];
    if (!g.is_doc(v)) {
      ag.feature_degree[b] += g.degree(v);
      continue;
    }
    ag.doc_degree[b] += g.degree(v);
    for (VertexId u : g.neighbors(v)) {
      const ClusterId c = assign[u];
      if (c == b) {
        ++ag.internal[b];
      } else {
        ++between[{b, c}];
        ++between[{c, b}];
      }
    }
  }
  ag.offsets.assign(n_clusters + 1, 0);
  for (const auto& [key, w] : between) ++ag.offsets[key.first + 1];
  for (std::size_t b = 0; b < n_clusters; ++b) ag.offsets[b + 1] += ag.offsets[b];
  for (const auto& [key, w] : between) {
    ag.neighbor.push_back(key.second);
    ag.weight.push_back(w);
  }
  return ag;
}

}  // namespace bimod::kernels
