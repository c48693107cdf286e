#include "bimod/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "bimod/error.hpp"

namespace bimod {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

nlohmann::json to_json(const PipelineConfig& cfg) {
  std::vector<std::string> stop(cfg.stoplist.begin(), cfg.stoplist.end());
  std::sort(stop.begin(), stop.end());
  std::string joined;
  for (const auto& w : stop) joined += w + '\n';
  return {
      {"stoplist_size", stop.size()},
      {"stoplist_digest", fnv1a_hex(joined)},
      {"stem", cfg.stem},
      {"min_doc_frequency", cfg.min_doc_frequency},
      {"bigrams", cfg.use_bigrams},
      {"lowercase", cfg.lowercase},
  };
}

nlohmann::json to_json(const ModularityValue& q) {
  return {{"total", q.total}, {"edge_term", q.edge_term}, {"null_term", q.null_term}};
}

void write_graph_tsv(const BipartiteGraph& g, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (VertexId d = 0; d < g.n_docs(); ++d) {
    const std::string doc = g.label(d);
    for (VertexId f : g.neighbors(d)) out << doc << '\t' << g.label(f) << "\t1\n";
  }
}

nlohmann::json graph_summary(const BipartiteGraph& g, const Corpus& corpus, const PipelineConfig& cfg) {
  return {
      {"n_docs", g.n_docs()},
      {"n_features", g.n_features()},
      {"n_vertices", g.n_vertices()},
      {"L", g.edge_count()},
      {"pipeline", to_json(cfg)},
      {"emptied_documents", corpus.emptied},
  };
}

void write_partition_tsv(const BipartiteGraph& g, const Partition& p, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (VertexId v = 0; v < g.n_vertices(); ++v) out << g.label(v) << '\t' << p.cluster_of(v) << '\n';
}

nlohmann::json partition_summary(const BipartiteGraph& g, const Partition& p, const ModularityValue& q,
                                 double lambda, std::size_t top_words) {
  std::vector<std::vector<VertexId>> features(p.n_clusters());
  std::vector<std::uint64_t> docs(p.n_clusters(), 0);
  for (VertexId v = 0; v < g.n_vertices(); ++v) {
    if (g.is_doc(v)) {
      ++docs[p.cluster_of(v)];
    } else {
      features[p.cluster_of(v)].push_back(v);
    }
  }
  nlohmann::json clusters = nlohmann::json::array();
  for (ClusterId c = 0; c < p.n_clusters(); ++c) {
    auto& fs = features[c];
    const auto keep = std::min(top_words, fs.size());
    std::partial_sort(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(keep), fs.end(),
                      [&](VertexId a, VertexId b) {
                        return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
                      });
    std::vector<std::string> words;
    for (std::size_t i = 0; i < keep; ++i) words.push_back(g.label(fs[i]));
    clusters.push_back({{"id", c}, {"size", p.size(c)}, {"documents", docs[c]}, {"top_words", words}});
  }
  return {
      {"n_clusters", p.n_clusters()},
      {"lambda", lambda},
      {"modularity", to_json(q)},
      {"clusters", clusters},
  };
}

std::optional<ClusterQuality> cluster_quality(const BipartiteGraph& g, const Corpus& corpus,
                                              const Partition& p) {
  std::vector<std::int64_t> pred, gold;
  std::map<std::string, std::int64_t> class_code;
  for (const auto& name : corpus.class_set) class_code.emplace(name, static_cast<std::int64_t>(class_code.size()));
  for (VertexId d = 0; d < corpus.documents.size() && d < g.n_docs(); ++d) {
    const auto& label = corpus.documents[d].gold_label;
    if (!label) continue;
    pred.push_back(p.cluster_of(d));
    gold.push_back(class_code.at(*label));
  }
  if (pred.empty()) return std::nullopt;
  ClusterQuality q;
  q.table = contingency(pred, gold);
  q.nmi = nmi(q.table);
  q.purity = purity(q.table);
  // contingency() orders classes by code; keep only the codes present.
  std::vector<std::int64_t> present(gold.begin(), gold.end());
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  std::vector<std::string> names(class_code.size());
  for (const auto& [name, code] : class_code) names[static_cast<std::size_t>(code)] = name;
  for (auto code : present) q.class_names.push_back(names[static_cast<std::size_t>(code)]);
  return q;
}

nlohmann::json to_json(const ClusterQuality& q) {
  return {
      {"nmi", q.nmi},
      {"purity", q.purity},
      {"contingency", {{"classes", q.class_names}, {"counts", q.table.joint}}},
  };
}

nlohmann::json to_json(const ClassScores& s) {
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& c : s.per_class) {
    per_class[c.name] = {{"tp", c.true_positive}, {"gold", c.gold}, {"pred", c.predicted},
                         {"recall", c.recall}, {"precision", c.precision}, {"f1", c.f1}};
  }
  return {{"micro_f1", s.micro_f1}, {"macro_f1", s.macro_f1}, {"documents", s.documents},
          {"per_class", per_class}};
}

void write_json(const nlohmann::json& value, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bimod
