#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bimod/graph.hpp"
#include "bimod/modularity.hpp"

namespace bimod {

/// Fixed class memberships for training documents and optional seed words.
struct TrainingAssignment {
  std::vector<std::pair<VertexId, std::uint32_t>> seeds;
  std::vector<std::string> class_names;

  std::size_t n_classes() const { return class_names.size(); }
  /// Throws DataError on an unknown vertex, a class index out of range, a
  /// vertex given two classes, or a class with no training vertex.
  void validate(const BipartiteGraph& g) const;
};

struct Classification {
  /// Exactly n_classes clusters; cluster c is class c.
  Partition partition;
  std::vector<std::uint32_t> vertex_class;
  /// Non-training vertices without edges (assigned by the largest-D1 rule).
  std::vector<VertexId> isolated;
};

struct ClassifyOptions {
  /// Run an extra vertex-level descent after redistribution and relabel each
  /// resulting cluster by the plurality class of its members. Training
  /// vertices still keep their class. Off by default.
  bool final_vertex_pass = false;
};

/// Training vertices form the class clusters, every other vertex starts as a
/// singleton, and redistribution with the classes as anchors labels the rest.
Classification classify(const BipartiteGraph& g, const TrainingAssignment& train,
                        const DescentConfig& cfg, const ClassifyOptions& options = {});

}  // namespace bimod
