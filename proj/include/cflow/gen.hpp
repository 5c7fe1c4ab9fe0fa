#pragma once

#include <cstdint>
#include <vector>

#include "cflow/network.hpp"

namespace cflow {
namespace gen {

enum class Family { Linear, SignedLinear, PwlGrid, Quadratic };

/// Shape and weight parameters for seeded random instances. Vertices are
/// arranged in layers 0..depth with edges only to strictly later layers
/// (or exactly the next layer with strict_layered), so the generated
/// depth is exact and every vertex lies on a source-sink path.
struct DagSpec {
  std::uint64_t seed = 1;
  int depth = 4;              // >= 1
  int max_interior = 10;      // vertices besides the terminals
  int extra_edges = 12;       // beyond the connecting skeleton
  int cap_low = 1, cap_high = 4;
  bool unit_caps = false;
  bool strict_layered = false;
  Family family = Family::Linear;
  int w_low = 1, w_high = 64;     // integer gradient band, declared as bounds
  double grid_unit = 0.0;         // PwlGrid: gradients are multiples of this
};

Network random_dag(const DagSpec& spec);

/// Sum of random source-sink path pushes within the capacities; conserving
/// by construction. Integer amounts on integer-capacity networks.
std::vector<double> random_conserving_flow(const Network& net,
                                           std::uint64_t seed);

/// Random potentials as multiples of `unit_count` grid units with equal
/// values at the terminals.
std::vector<std::int64_t> random_grid_potentials(const Network& net,
                                                 std::uint64_t seed,
                                                 std::int64_t unit_count,
                                                 std::int64_t magnitude);

}  // namespace gen
}  // namespace cflow
