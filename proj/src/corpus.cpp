#include "bimod/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "bimod/error.hpp"
#include "bimod/porter.hpp"

namespace bimod {

const char* to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
    case Split::kUnlabeled: return "unlabeled";
  }
  return "unknown";
}

std::size_t Corpus::count(Split s) const {
  return static_cast<std::size_t>(std::count_if(
      documents.begin(), documents.end(), [s](const Document& d) { return d.split == s; }));
}

PipelineConfig PipelineConfig::standard() {
  PipelineConfig cfg;
  cfg.stoplist = default_stoplist();
  return cfg;
}

void PipelineConfig::validate() const {
  if (min_doc_frequency < 1) throw UsageError("min_doc_frequency must be >= 1");
}

Corpus load_corpus(const std::filesystem::path& path, Split split) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  const std::string name = path.filename().string();

  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string label;
    if (!(fields >> label)) continue;
    Document doc;
    doc.doc_id = name + ":" + std::to_string(line_no);
    doc.split = split;
    for (std::string tok; fields >> tok;) doc.tokens.push_back(std::move(tok));
    if (doc.tokens.empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected a label followed by at least one token");
    }
    if (!ids.insert(doc.doc_id).second) throw DataError("duplicate document id " + doc.doc_id);
    corpus.class_set.insert(label);
    doc.gold_label = std::move(label);
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) {
    corpus.warnings.push_back("corpus file " + path.string() + " contains no documents");
  }
  return corpus;
}

Corpus merge_corpora(Corpus first, const Corpus& second) {
  std::unordered_set<std::string> ids;
  for (const auto& d : first.documents) ids.insert(d.doc_id);
  for (const auto& d : second.documents) {
    if (!ids.insert(d.doc_id).second) throw DataError("duplicate document id " + d.doc_id);
    first.documents.push_back(d);
  }
  first.class_set.insert(second.class_set.begin(), second.class_set.end());
  first.warnings.insert(first.warnings.end(), second.warnings.begin(), second.warnings.end());
  first.emptied.insert(first.emptied.end(), second.emptied.begin(), second.emptied.end());
  return first;
}

Corpus preprocess(const Corpus& corpus, const PipelineConfig& cfg) {
  cfg.validate();
  Corpus out = corpus;
  out.emptied.clear();
  const auto n = static_cast<std::int64_t>(out.documents.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<std::string> kept;
    auto& tokens = out.documents[static_cast<std::size_t>(i)].tokens;
    kept.reserve(tokens.size());
    for (auto& tok : tokens) {
      if (cfg.lowercase) {
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      }
      if (cfg.stoplist.contains(tok)) continue;
      kept.push_back(cfg.stem ? porter_stem(tok) : std::move(tok));
    }
    tokens = std::move(kept);
  }

  if (cfg.min_doc_frequency > 1) {
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : out.documents) {
      std::vector<const std::string*> distinct;
      distinct.reserve(doc.tokens.size());
      for (const auto& t : doc.tokens) distinct.push_back(&t);
      std::sort(distinct.begin(), distinct.end(), [](auto* a, auto* b) { return *a < *b; });
      distinct.erase(std::unique(distinct.begin(), distinct.end(),
                                 [](auto* a, auto* b) { return *a == *b; }),
                     distinct.end());
      for (const auto* t : distinct) ++df[*t];
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      auto& tokens = out.documents[static_cast<std::size_t>(i)].tokens;
      std::erase_if(tokens, [&](const std::string& t) { return df.at(t) < cfg.min_doc_frequency; });
    }
  }

  for (const auto& doc : out.documents) {
    if (doc.tokens.empty()) out.emptied.push_back(doc.doc_id);
  }
  return out;
}

BipartiteGraph build_graph(const Corpus& corpus, const PipelineConfig& cfg) {
  cfg.validate();
  const bool any_tokens = std::any_of(corpus.documents.begin(), corpus.documents.end(),
                                      [](const Document& d) { return !d.tokens.empty(); });
  if (!any_tokens) throw DataError("cannot build a graph: no document has any tokens");

  // Bigram document frequencies, needed before numbering so that rare
  // bigrams never get a vertex.
  std::unordered_map<std::string, std::size_t> bigram_df;
  const auto bigram = [](const std::string& a, const std::string& b) { return a + "_" + b; };
  if (cfg.use_bigrams) {
    for (const auto& doc : corpus.documents) {
      std::unordered_set<std::string> seen;
      for (std::size_t i = 1; i < doc.tokens.size(); ++i) {
        seen.insert(bigram(doc.tokens[i - 1], doc.tokens[i]));
      }
      for (const auto& b : seen) ++bigram_df[b];
    }
  }

  std::unordered_map<std::string, std::uint32_t> word_id, bigram_id;
  std::vector<std::string> feature_labels;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  const auto intern = [&](std::unordered_map<std::string, std::uint32_t>& ids, std::string key) {
    auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(feature_labels.size()));
    if (inserted) feature_labels.push_back(std::move(key));
    return it->second;
  };

  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& tokens = corpus.documents[d].tokens;
    const auto doc = static_cast<std::uint32_t>(d);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      edges.emplace_back(doc, intern(word_id, tokens[i]));
      if (cfg.use_bigrams && i > 0) {
        std::string key = bigram(tokens[i - 1], tokens[i]);
        if (bigram_df[key] >= cfg.min_doc_frequency) {
          edges.emplace_back(doc, intern(bigram_id, std::move(key)));
        }
      }
    }
  }

  std::vector<std::string> labels;
  labels.reserve(corpus.documents.size() + feature_labels.size());
  for (const auto& doc : corpus.documents) labels.push_back(doc.doc_id);
  for (auto& f : feature_labels) labels.push_back(std::move(f));
  return BipartiteGraph::from_edges(corpus.documents.size(), feature_labels.size(), edges,
                                    std::move(labels));
}

}  // namespace bimod
