#pragma once

#include <cstdint>

namespace cflow {

/// Normalized weight grid shared by the scaling drivers.
///
/// eps is rounded down to a power of two and `upper` is raised so that
/// upper / lower is a power of two; every step size and every potential is
/// then an exact integer multiple of the base unit  unit = eps * lower.
/// Scale i in [0, levels] uses step 2^(levels - i) units, so the first
/// step is eps * upper and the last is eps * lower.
struct WeightGrid {
  double eps = 0.0;     // effective tolerance (power of two)
  double lower = 0.0;   // gradient lower bound
  double upper = 0.0;   // gradient upper bound after rounding up
  int levels = 0;       // log2(upper / lower)
  int eps_log2 = 0;     // eps == 2^-eps_log2
  double unit = 0.0;    // eps * lower

  std::int64_t step_units(int scale) const {
    return std::int64_t{1} << (levels - scale);
  }
  double step(int scale) const {
    return static_cast<double>(step_units(scale)) * unit;
  }
  /// upper expressed in base units: 2^(levels + eps_log2).
  std::int64_t upper_units() const {
    return std::int64_t{1} << (levels + eps_log2);
  }

  static WeightGrid normalize(double eps_requested, double lower, double upper);
};

}  // namespace cflow
