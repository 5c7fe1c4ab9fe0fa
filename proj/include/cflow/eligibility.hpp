#pragma once

#include <cstdint>
#include <vector>

#include "cflow/grid.hpp"
#include "cflow/network.hpp"

namespace cflow {

enum class RuleSet { Simple, Scaling, Concave };

/// Mutable solver state: per-edge flow, per-vertex potentials held as
/// exact integer multiples of the grid unit, the current scale, and the
/// last scale at which each edge received forward flow (-1 = never).
struct FlowState {
  RuleSet rules = RuleSet::Scaling;
  WeightGrid grid;
  int scale = 0;
  std::vector<double> flow;
  std::vector<std::int64_t> potential;
  std::vector<int> forward_scale;
  /// Linear weight per edge as used by the rules: a grid-rounded copy in
  /// Simple mode, the raw weight in Scaling mode, unused in Concave mode.
  std::vector<double> weights;

  std::int64_t step_units() const { return grid.step_units(scale); }
  double step() const { return grid.step(scale); }
  void advance_scale() { ++scale; }
  double potential_weight(int v) const {
    return static_cast<double>(potential[v]) * grid.unit;
  }
};

/// x = 0, p_u = upper * level(u), scale 0 (the single final scale for the
/// Simple rules, whose step is already the base unit).
FlowState initial_state(const Network& net, const WeightGrid& grid,
                        RuleSet rules);

/// w_e(x) + p_u - p_v at the given flow value (current x_e by default).
double reduced_gradient(const Network& net, const FlowState& state, int e,
                        double x);
double reduced_gradient(const Network& net, const FlowState& state, int e);

struct EligibleArc {
  int edge = -1;
  bool forward = true;
  int from = -1, to = -1;
  double capacity = 0.0;
};

/// Residual arcs whose reduced weights satisfy the current rule set,
/// with their admissible capacities, plus reachability from the source.
struct EligibleGraph {
  int vertex_count = 0;
  int source = -1, sink = -1;
  std::vector<EligibleArc> arcs;
  std::vector<std::vector<int>> out;   // arc ids leaving each vertex
  std::vector<char> reachable;         // from source over the arcs
  long forward_count = 0, backward_count = 0;
};

/// Rule sets:
///  - Simple:  forward iff x=0 and w^p = step, backward iff x=1 and w^p = 0
///             (unit capacities);
///  - Scaling: forward iff x<c and w^p >= step (capacity c-x),
///             backward iff x>0 and w^p <= 0 (capacity x);
///  - Concave: capacities from the headroom queries at thresholds
///             step-(p_u-p_v) forward and -(p_u-p_v) backward.
/// Arcs with capacity below the flow tolerance are dropped. Adjacency is
/// deterministic: forward arcs in edge input order, then backward arcs in
/// reverse edge order.
EligibleGraph build_eligible_graph(const Network& net, const FlowState& state);

}  // namespace cflow
