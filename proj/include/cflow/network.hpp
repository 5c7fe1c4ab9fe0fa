#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cflow/weights.hpp"

namespace cflow {

/// Edge description before validation. Vertices are arbitrary tokens;
/// "s" and "t" (or the names set in RawNetwork) are the terminals.
struct RawEdge {
  std::string tail;
  std::string head;
  double capacity = 0.0;
  WeightPtr weight;
  int line = 0;  // source line for diagnostics, 0 when built in code
};

struct RawNetwork {
  std::vector<RawEdge> edges;
  bool signed_mode = false;
  std::optional<std::pair<double, double>> declared_bounds;
  std::string source_name = "s";
  std::string sink_name = "t";
  // header counts from the text form; -1 skips the consistency check
  int declared_vertices = -1;
  int declared_edges = -1;
};

struct Edge {
  int tail = -1;
  int head = -1;
  double capacity = 0.0;
  WeightPtr weight;
};

/// Validated acyclic flow network.
///
/// Construction rejects cycles, prunes vertices that lie on no
/// source-sink path, and assigns each vertex the edge count of a longest
/// path from the source (level). Immutable afterwards; safe to share
/// across threads.
class Network {
public:
  Network() = default;  // empty shell; fill via validate_and_level

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int source() const { return source_; }
  int sink() const { return sink_; }
  const std::string& name(int v) const { return names_[v]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::vector<int>& in_edges(int v) const { return in_[v]; }
  int level(int v) const { return level_[v]; }
  int level_span(int e) const {
    return level_[edges_[e].head] - level_[edges_[e].tail];
  }
  int depth() const { return level_[sink_]; }
  bool signed_mode() const { return signed_mode_; }
  bool has_declared_bounds() const { return declared_bounds_.has_value(); }

  /// Gradient bounds: declared when present, otherwise computed from the
  /// edges (bounds on |w| in signed mode).
  double weight_lower() const { return bounds_.first; }
  double weight_upper() const { return bounds_.second; }

  bool all_linear() const;
  bool all_unit_capacity() const;
  double max_capacity() const;
  double total_capacity() const;

  /// Canonical text form; parse(serialize()) reproduces the network.
  std::string serialize() const;

  friend Network validate_and_level(const RawNetwork& raw);

private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> level_;
  int source_ = -1, sink_ = -1;
  bool signed_mode_ = false;
  std::optional<std::pair<double, double>> declared_bounds_;
  std::pair<double, double> bounds_{0.0, 0.0};
};

/// Checks acyclicity, prunes vertices off every source-sink path, computes
/// longest-path levels, and validates capacities and weight bounds.
Network validate_and_level(const RawNetwork& raw);

/// Parses the line-based text form:
///
///   net <n> <m> [signed]
///   e <u> <v> <capacity> <weight-spec>
///   bounds <w_min> <w_max>
///
/// with '#' comments. Weight specs: `lin <w>`, `quad <a> <b>`,
/// `pwl <k> <x_1> <g_1> ... <x_k> <g_k>`.
Network parse_network(const std::string& text);
Network parse_network_file(const std::string& path);

/// Absolute flow tolerance used throughout: 1e-9 * max edge capacity.
double flow_tolerance(const Network& net);

struct PaddingReport {
  double reference = 0.0;   // largest f_e at the knee
  double bump = 0.0;        // linear gradient added everywhere
  double knee = 0.0;        // eps / m^2
  double lower = 0.0;       // effective gradient lower bound after padding
  double upper = 0.0;       // effective gradient upper bound after padding
  double ratio_bound = 0.0; // proven bound on upper / lower
};

/// Gradient padding preprocessor. Requires integer capacities and
/// non-negative increasing weight functions; returns a network whose
/// gradients all lie in a band of ratio at most
/// m^2 * (total capacity) / eps^2 + 1 while changing the optimum by at
/// most a (1 + eps) factor.
Network pad_gradients(const Network& net, double eps,
                      PaddingReport* report = nullptr);

}  // namespace cflow
