#include "cflow/grid.hpp"

#include <cmath>

#include "cflow/weights.hpp"

namespace cflow {

WeightGrid WeightGrid::normalize(double eps_requested, double lower,
                                 double upper) {
  if (!(eps_requested > 0.0) || !(eps_requested < 1.0))
    throw InputError("eps must lie in (0, 1)");
  if (!(lower > 0.0) || !std::isfinite(upper) || upper < lower)
    throw InputError("gradient bounds must satisfy 0 < lower <= upper");

  WeightGrid g;
  g.eps_log2 = 1;
  while (std::ldexp(1.0, -g.eps_log2) > eps_requested) ++g.eps_log2;
  g.eps = std::ldexp(1.0, -g.eps_log2);

  g.levels = 0;
  while (std::ldexp(lower, g.levels) < upper * (1.0 - 1e-12)) ++g.levels;
  g.lower = lower;
  g.upper = std::ldexp(lower, g.levels);
  g.unit = g.eps * g.lower;

  if (g.levels + g.eps_log2 > 48)
    throw InputError("weight range / eps grid too fine for exact arithmetic");
  return g;
}

}  // namespace cflow
