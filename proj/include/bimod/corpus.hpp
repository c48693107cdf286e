#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bimod/graph.hpp"
#include "bimod/stoplist.hpp"

namespace bimod {

enum class Split { kTrain, kTest, kUnlabeled };

const char* to_string(Split s);

struct Document {
  std::string doc_id;
  std::optional<std::string> gold_label;
  Split split = Split::kUnlabeled;
  std::vector<std::string> tokens;
};

struct Corpus {
  std::vector<Document> documents;
  std::set<std::string> class_set;
  /// Non-fatal notes produced while loading.
  std::vector<std::string> warnings;
  /// Ids of documents left without tokens by preprocessing; they stay in the
  /// corpus and become isolated vertices.
  std::vector<std::string> emptied;

  std::size_t size() const { return documents.size(); }
  std::size_t count(Split s) const;
};

struct PipelineConfig {
  Stoplist stoplist;
  bool stem = true;
  std::size_t min_doc_frequency = 5;
  bool use_bigrams = false;
  bool lowercase = true;

  /// SMART stoplist, Porter stemming, features in at least five documents.
  static PipelineConfig standard();
  /// Throws UsageError when min_doc_frequency < 1.
  void validate() const;
};

/// Reads the labeled-lines format: one document per line, first field the
/// class label, remaining whitespace-separated fields the tokens. Document
/// ids are "<file name>:<line number>". Blank lines are skipped.
/// Throws DataError on a missing file or a line with fewer than two fields.
Corpus load_corpus(const std::filesystem::path& path, Split split = Split::kUnlabeled);

/// Concatenates two corpora; throws DataError on a repeated document id.
Corpus merge_corpora(Corpus first, const Corpus& second);

/// Lowercase, drop stop words, stem, then drop tokens found in fewer than
/// min_doc_frequency documents.
Corpus preprocess(const Corpus& corpus, const PipelineConfig& cfg);

/// One vertex per document (corpus order), then one per distinct feature in
/// order of first occurrence. Bigrams "a_b" of consecutive tokens are added
/// when enabled and kept only if they reach min_doc_frequency. Edges are
/// presence-based with unit weight. Throws DataError when no document has tokens.
BipartiteGraph build_graph(const Corpus& corpus, const PipelineConfig& cfg);

}  // namespace bimod
