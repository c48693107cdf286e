#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bimod {

/// Class-by-cluster overlap counts for two labelings of the same documents.
struct Contingency {
  std::uint64_t total = 0;                        // N
  std::vector<std::uint64_t> class_count;         // N_l
  std::vector<std::uint64_t> cluster_count;       // N_m
  std::vector<std::vector<std::uint64_t>> joint;  // N_lm, [class][cluster]

  std::size_t n_classes() const { return class_count.size(); }
  std::size_t n_clusters() const { return cluster_count.size(); }
};

/// Integer-coded labelings; codes need not be dense. Throws DataError when
/// the lengths differ.
Contingency contingency(std::span<const std::int64_t> pred, std::span<const std::int64_t> gold);

/// Maps strings to dense codes in order of first appearance.
std::vector<std::int64_t> encode_labels(std::span<const std::string> labels);

/// Normalized mutual information with natural logs and 0 log 0 = 0.
/// Returns 0 when either labeling has a single cluster.
double nmi(std::span<const std::int64_t> pred, std::span<const std::int64_t> gold);
double nmi(const Contingency& table);

/// Fraction of documents in their cluster's majority class.
double purity(std::span<const std::int64_t> pred, std::span<const std::int64_t> gold);
double purity(const Contingency& table);

struct ClassScore {
  std::string name;
  std::uint64_t true_positive = 0;
  std::uint64_t gold = 0;       // N1(c)
  std::uint64_t predicted = 0;  // N2(c)
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct ClassScores {
  std::vector<ClassScore> per_class;
  std::uint64_t documents = 0;  // D
  /// Percentages.
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

/// Single-label classification scores over `classes`. Every predicted and
/// gold label must belong to `classes` (DataError otherwise). F(c) is 0 when
/// R(c) + P(c) = 0.
ClassScores f1_scores(std::span<const std::string> pred, std::span<const std::string> gold,
                      std::span<const std::string> classes);

}  // namespace bimod
