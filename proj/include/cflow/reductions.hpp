#pragma once

#include <string>
#include <vector>

#include "cflow/network.hpp"

namespace cflow {

enum class ObjectiveTransform { Identity, NegateCost };

/// A constructed network plus the back-map from its edges to application
/// entities. Carrier edges hold the application's weights; auxiliary
/// edges receive a small positive weight (the solvers require positive
/// gradients) whose worst-case objective contribution is reported as
/// `aux_slack`. Builders accept an aux weight override; zero is fine for
/// the exact oracle, which has no positivity requirement.
struct ReductionMap {
  Network network;
  std::vector<std::string> edge_entity;  // per edge: "aux" or an entity key
  ObjectiveTransform transform = ObjectiveTransform::Identity;
  double aux_weight = 0.0;
  double aux_slack = 0.0;

  /// Application objective recovered from a feasible network flow:
  /// carrier contributions only, negated for cost minimization.
  double application_objective(const std::vector<double>& flow) const;
};

struct AssignmentPair {
  int left = 0, right = 0;  // 1-based
  WeightPtr utility;        // pair weight or concave pair utility
};

/// Bipartite assignment with side capacities as a depth-3 network:
/// s -> left -> right -> t, pair edges carry the utilities.
ReductionMap assignment_to_network(const std::vector<long>& left_caps,
                                   const std::vector<long>& right_caps,
                                   const std::vector<AssignmentPair>& pairs,
                                   double eps, double aux_weight = -1.0);

struct ChainTuple {
  std::string x, y, z;
};
struct ChainEdgeXY {
  std::string x, y;
  double w = 0.0;
};
struct ChainEdgeYZ {
  std::string y, z;
  double w = 0.0;
};

/// Restricted three-set matching (tuples formed by an XY and a YZ edge
/// sharing the middle element) as a depth-5 network. Middle elements get
/// split vertices; the unit bound on outer elements rides on the terminal
/// edges.
ReductionMap chained_matching_to_network(const std::vector<ChainEdgeXY>& xy,
                                         const std::vector<ChainEdgeYZ>& yz,
                                         double eps, double aux_weight = -1.0);

struct Job {
  int start = 1, end = 1;  // inclusive day window, 1-based
  double gain = 0.0;
};

/// Interval scheduling with per-day concurrency limits: the days form a
/// path with the day capacities, each job enters the path at its start
/// day through a gain-weighted edge (and may skip straight to its end day
/// at zero gain); depth = days + 2.
ReductionMap scheduling_to_network(const std::vector<Job>& jobs,
                                   const std::vector<long>& day_caps,
                                   double eps, double aux_weight = -1.0);

/// Min-cost flow with a per-unit reward: costs negate into signed weights
/// and a reward edge from the old sink feeds a fresh sink. The cost
/// network's edges must be linear with positive weights (the costs).
ReductionMap mincost_with_reward(const Network& cost_net, double reward);

struct SourceSpec {
  std::string name;
  WeightPtr utility;  // concave f_i of the total flow out of this source;
                      // capacity is derived from the source's out-edges
};

/// Multiple sources with concave per-source utilities: a super-source
/// feeds each s_i through an edge carrying f_i; interior edges become
/// auxiliary. Adds exactly one level of depth.
ReductionMap multisource_concave_to_network(
    const RawNetwork& interior, const std::vector<SourceSpec>& sources,
    double eps, double aux_weight = -1.0);

}  // namespace cflow
