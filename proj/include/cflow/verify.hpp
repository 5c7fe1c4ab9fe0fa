#pragma once

#include <string>
#include <vector>

#include "cflow/audit.hpp"
#include "cflow/solver.hpp"

namespace cflow {

/// Network with every concave edge broken into parallel linear edges whose
/// weights descend the grid in single units; the step gradient they induce
/// never exceeds the original gradient.
struct ExpandedNetwork {
  Network network;
  std::vector<std::vector<int>> pieces;  // original edge -> expanded ids,
                                         // in decreasing weight order
};

/// Breaks each edge at the points where its gradient crosses a multiple of
/// `unit`: piece weights run from floor(w(0)/unit)*unit down to
/// floor(w(cap)/unit)*unit in unit steps, piece capacities are the
/// distances between consecutive crossings. Degenerate zero-capacity
/// pieces are dropped. Piece weights for inputs already on the grid equal
/// the input gradients exactly.
ExpandedNetwork expand_multiedges(const Network& net, double unit,
                                  long max_edges = 1000000);

/// Distributes x over an edge's pieces greedily in decreasing weight
/// order; the unique well-ordered filling with the given total.
std::vector<double> well_ordered_fill(const ExpandedNetwork& expanded,
                                      int original_edge, double x);

struct OracleCaps {
  long max_edges = 50000;
  double max_total_capacity = 1e7;
  long max_augmentations = 1000000;

  /// CFLOW_ORACLE_CAP=<n> caps both the edge count and the total capacity.
  static OracleCaps from_env();
};

struct OracleResult {
  double value = 0.0;
  std::vector<double> flow;
  long augmentations = 0;
};

/// Exact maximum-weight conserving flow for linear weights (signed
/// allowed): successive augmentation along maximum-weight residual paths,
/// stopping when the best path weight drops to zero. Exact on grid
/// inputs; independent of the scaling drivers.
OracleResult exact_linear_opt(const Network& net,
                              const OracleCaps& caps = OracleCaps::from_env());

struct Certificate {
  bool certified = false;       // reference value was computed
  std::string reference_kind;   // "oracle" or "expansion-lb"
  double objective = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  double bound = 0.0;           // 1-eps / 1-8eps / 1-9eps with effective eps
  bool bound_claimed = false;   // eps small enough for the stated factor
  bool pass = false;
  std::string note;
  // signed mode decomposition of the oracle optimum
  bool signed_mode = false;
  double positive_part = 0.0;
  double negative_part = 0.0;
  double signed_rhs = 0.0;
};

/// Compares the achieved objective against the oracle (linear) or the
/// below-step expansion lower bound (concave) at the rule set's
/// approximation factor. An instance over the oracle caps yields an
/// uncertified record instead of an error.
Certificate certify(const SolveResult& result, const Network& net,
                    const OracleCaps& caps = OracleCaps::from_env());

}  // namespace cflow
