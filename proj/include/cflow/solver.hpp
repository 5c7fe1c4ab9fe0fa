#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cflow/audit.hpp"
#include "cflow/blocking.hpp"
#include "cflow/eligibility.hpp"

namespace cflow {

enum class AuditMode { EveryIteration, PerScale, Off };

struct SolveOptions {
  double eps = 1.0 / 16;
  AuditMode audit = AuditMode::EveryIteration;
  std::ostream* trace = nullptr;  // one line per iteration when set
};

struct ScaleStats {
  int scale = 0;
  double step = 0.0;
  long iterations = 0;
  double pushed = 0.0;   // total augmentation value in this scale
  long peak_arcs = 0;
};

struct SolveResult {
  RuleSet rules = RuleSet::Scaling;
  WeightGrid grid;
  std::vector<double> flow;
  double objective = 0.0;             // sum of f_e at the final flow
  std::vector<std::int64_t> potential_units;
  std::vector<int> forward_scale;     // last scale with a forward push, -1 none
  std::vector<double> dual_slack;     // max(0, w^p_e) at termination
  std::vector<ScaleStats> scales;
  double total_pushed = 0.0;
  AuditReport audit;
  double wall_ms = 0.0;

  double potential(int v) const {
    return static_cast<double>(potential_units[v]) * grid.unit;
  }
};

/// Unit capacities and linear weights; weights are rounded onto the
/// eps * w_min grid internally, potentials start at w_max * level and one
/// phase of eligibility labeling / maximal disjoint paths / dual
/// adjustment runs until the sink potential reaches zero. The result is a
/// (1 - eps)-approximation on the rounded weights.
SolveResult simple_flow(const Network& net, const SolveOptions& opt);

/// Linear weights, arbitrary capacities (negative weights in signed
/// mode). Runs scales 0..T with the step halved between scales, blocking
/// flow augmentations and a dual rescale at each boundary. For
/// eps < 1/10 the objective is at least (1 - 8 eps) times the optimum.
SolveResult scaling_flow(const Network& net, const SolveOptions& opt);

/// Concave weight functions with gradients inside the declared band; the
/// scaling driver with headroom-based eligibility capacities. For
/// eps < 1/10 the objective is at least (1 - 9 eps) times the optimum.
SolveResult concave_flow(const Network& net, const SolveOptions& opt);

/// Subtracts the current step from the potential of every vertex that the
/// eligible graph cannot reach from the source.
void dual_adjust(FlowState& state, const EligibleGraph& g);

/// Adds step * level(u) to every potential; run between scales so that
/// halving the step preserves the invariants.
void dual_rescale(FlowState& state, const Network& net);

/// Applies the net pushed amounts to the flow and stamps the current
/// scale on every edge that received a forward push on some path.
void apply_augmentation(const Network& net, FlowState& state,
                        const Augmentation& aug, const EligibleGraph& g,
                        double zero_tol);

}  // namespace cflow
