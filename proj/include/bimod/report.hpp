#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bimod/corpus.hpp"
#include "bimod/eval.hpp"
#include "bimod/graph.hpp"
#include "bimod/modularity.hpp"

namespace bimod {

nlohmann::json to_json(const PipelineConfig& cfg);
nlohmann::json to_json(const ModularityValue& q);

/// Edge list `doc_id<TAB>feature<TAB>1`, one line per edge in vertex order.
void write_graph_tsv(const BipartiteGraph& g, const std::filesystem::path& path);
nlohmann::json graph_summary(const BipartiteGraph& g, const Corpus& corpus, const PipelineConfig& cfg);

/// `vertex_label<TAB>cluster_id` for every vertex.
void write_partition_tsv(const BipartiteGraph& g, const Partition& p, const std::filesystem::path& path);

/// Cluster count, modularity terms, lambda, sizes, and the highest-degree
/// feature labels of every cluster.
nlohmann::json partition_summary(const BipartiteGraph& g, const Partition& p, const ModularityValue& q,
                                 double lambda, std::size_t top_words = 10);

/// Document-level clustering quality against gold labels. Documents without
/// a gold label are left out; returns nullopt when none has one.
struct ClusterQuality {
  double nmi = 0.0;
  double purity = 0.0;
  Contingency table;
  std::vector<std::string> class_names;
};
std::optional<ClusterQuality> cluster_quality(const BipartiteGraph& g, const Corpus& corpus,
                                              const Partition& p);
nlohmann::json to_json(const ClusterQuality& q);
nlohmann::json to_json(const ClassScores& s);

void write_json(const nlohmann::json& value, const std::filesystem::path& path);
/// FNV-1a 64-bit digest, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace bimod
