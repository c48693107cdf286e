#include "bimod/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "bimod/error.hpp"

namespace bimod {

namespace {

std::vector<std::size_t> densify(std::span<const std::int64_t> labels, std::size_t& count) {
  std::map<std::int64_t, std::size_t> ids;
  for (auto x : labels) ids.emplace(x, 0);
  std::size_t next = 0;
  for (auto& [key, id] : ids) id = next++;
  count = next;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (auto x : labels) out.push_back(ids.at(x));
  return out;
}

}  // namespace

Contingency contingency(std::span<const std::int64_t> pred, std::span<const std::int64_t> gold) {
  if (pred.size() != gold.size()) {
    throw DataError("labelings cover different document sets (" + std::to_string(pred.size()) +
                    " vs " + std::to_string(gold.size()) + ")");
  }
  Contingency t;
  std::size_t k = 0, c = 0;
  const auto clusters = densify(pred, k);
  const auto classes = densify(gold, c);
  t.total = pred.size();
  t.class_count.assign(c, 0);
  t.cluster_count.assign(k, 0);
  t.joint.assign(c, std::vector<std::uint64_t>(k, 0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++t.class_count[classes[i]];
    ++t.cluster_count[clusters[i]];
    ++t.joint[classes[i]][clusters[i]];
  }
  return t;
}

std::vector<std::int64_t> encode_labels(std::span<const std::string> labels) {
  std::unordered_map<std::string, std::int64_t> ids;
  std::vector<std::int64_t> out;
  out.reserve(labels.size());
  for (const auto& s : labels) {
    out.push_back(ids.try_emplace(s, static_cast<std::int64_t>(ids.size())).first->second);
  }
  return out;
}

double nmi(const Contingency& t) {
  if (t.total == 0) throw DataError("nmi: no documents");
  if (t.n_classes() <= 1 || t.n_clusters() <= 1) return 0.0;
  const auto n = static_cast<double>(t.total);
  double mutual = 0.0;
  for (std::size_t l = 0; l < t.n_classes(); ++l) {
    for (std::size_t m = 0; m < t.n_clusters(); ++m) {
      const auto nlm = static_cast<double>(t.joint[l][m]);
      if (nlm == 0.0) continue;
      mutual += nlm * std::log(n * nlm /
                               (static_cast<double>(t.class_count[l]) *
                                static_cast<double>(t.cluster_count[m])));
    }
  }
  double h_cluster = 0.0, h_class = 0.0;
  for (auto nm : t.cluster_count) {
    const auto x = static_cast<double>(nm);
    h_cluster += x * std::log(x / n);
  }
  for (auto nl : t.class_count) {
    const auto x = static_cast<double>(nl);
    h_class += x * std::log(x / n);
  }
  return mutual / std::sqrt(h_cluster * h_class);
}

double nmi(std::span<const std::int64_t> pred, std::span<const std::int64_t> gold) {
  return nmi(contingency(pred, gold));
}

double purity(const Contingency& t) {
  if (t.total == 0) throw DataError("purity: no documents");
  std::uint64_t hits = 0;
  for (std::size_t m = 0; m < t.n_clusters(); ++m) {
    std::uint64_t best = 0;
    for (std::size_t l = 0; l < t.n_classes(); ++l) best = std::max(best, t.joint[l][m]);
    hits += best;
  }
  return static_cast<double>(hits) / static_cast<double>(t.total);
}

double purity(std::span<const std::int64_t> pred, std::span<const std::int64_t> gold) {
  return purity(contingency(pred, gold));
}

ClassScores f1_scores(std::span<const std::string> pred, std::span<const std::string> gold,
                      std::span<const std::string> classes) {
  if (pred.size() != gold.size()) {
    throw DataError("f1: predictions and gold labels cover different document sets");
  }
  std::unordered_map<std::string, std::size_t> index;
  ClassScores out;
  for (const auto& c : classes) {
    if (index.try_emplace(c, out.per_class.size()).second) {
      out.per_class.push_back(ClassScore{.name = c});
    }
  }
  const auto lookup = [&](const std::string& name, const char* what) {
    const auto it = index.find(name);
    if (it == index.end()) {
      throw DataError(std::string("f1: ") + what + " class '" + name + "' is not in the class vocabulary");
    }
    return it->second;
  };
  std::uint64_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto p = lookup(pred[i], "predicted");
    const auto g = lookup(gold[i], "gold");
    ++out.per_class[p].predicted;
    ++out.per_class[g].gold;
    if (p == g) {
      ++out.per_class[p].true_positive;
      ++correct;
    }
  }
  out.documents = pred.size();
  double f_sum = 0.0;
  for (auto& c : out.per_class) {
    const auto tp = static_cast<double>(c.true_positive);
    c.recall = c.gold ? tp / static_cast<double>(c.gold) : 0.0;
    c.precision = c.predicted ? tp / static_cast<double>(c.predicted) : 0.0;
    c.f1 = (c.recall + c.precision) > 0.0
               ? 2.0 * c.recall * c.precision / (c.recall + c.precision)
               : 0.0;
    f_sum += c.f1;
  }
  out.micro_f1 = out.documents ? 100.0 * static_cast<double>(correct) / static_cast<double>(out.documents) : 0.0;
  out.macro_f1 = out.per_class.empty() ? 0.0 : 100.0 * f_sum / static_cast<double>(out.per_class.size());
  return out;
}

}  // namespace bimod
