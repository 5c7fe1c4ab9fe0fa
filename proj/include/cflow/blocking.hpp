#pragma once

#include <vector>

#include "cflow/eligibility.hpp"

namespace cflow {

struct PathPush {
  double amount = 0.0;
  std::vector<int> arcs;  // arc ids along the path, source to sink
};

/// A feasible flow on an eligible graph, kept path-by-path so the caller
/// can tell which edges received forward pushes.
struct Augmentation {
  double value = 0.0;
  std::vector<PathPush> paths;
  std::vector<double> arc_flow;  // per arc id
};

/// Unit flow on a maximal set of pairwise edge-disjoint source-sink paths
/// (depth-first search with arc deletion). Requires unit arc capacities.
/// After removing the used arcs no source-sink path remains.
Augmentation maximal_disjoint_paths(const EligibleGraph& g);

/// A flow such that every source-sink path in the graph contains a
/// saturated arc: breadth-first layered phases with depth-first
/// saturation, repeated until the sink is unreachable in the remaining
/// capacities. Arcs with remaining capacity <= zero_tol count as
/// saturated.
Augmentation blocking_flow(const EligibleGraph& g, double zero_tol);

/// Literal postcondition check: no source-sink path among arcs whose
/// capacity minus pushed amount exceeds zero_tol.
bool is_blocked(const EligibleGraph& g, const Augmentation& aug,
                double zero_tol);

}  // namespace cflow
