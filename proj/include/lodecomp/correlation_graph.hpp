#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "lodecomp/decomposition.hpp"
#include "lodecomp/state.hpp"

namespace lodecomp {

struct GraphNode {
  std::size_t subsystem;
  std::size_t block;  // index into that subsystem's partition
};

struct GraphEdge {
  std::size_t a;
  std::size_t b;
  double weight;  // ||Pi_a Pi_b |psi>||^2
};

/// Blocks of all subsystems joined wherever the state has weight on both.
struct CorrelationGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;  // accepted edges only
  std::vector<std::vector<std::size_t>> components;  // node indices
  std::vector<std::size_t> component_of;             // per node
  double min_accepted_edge = std::numeric_limits<double>::infinity();
  double max_rejected_edge = 0.0;
};

/// Nodes are (subsystem, block) pairs; two blocks on different subsystems
/// are joined when ||Pi_a Pi_b |psi>||^2 > t_edge. Blocks of one subsystem
/// must be mutually orthogonal and together carry the whole state.
CorrelationGraph build_correlation_graph(const StateTensor& state,
                                         const std::vector<SubspacePartition>& blocks,
                                         double t_edge);

}  // namespace lodecomp
