#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP implementation used
// by the library and a plain serial reference used by the tests and the
// benchmark. The OpenMP kernels do all per-node work independently, so their
// output does not depend on the thread count.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "plap/coeffs.hpp"
#include "plap/grid.hpp"

namespace plap::kernels {

inline constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

struct StepInputs {
  const Grid* grid = nullptr;
  PLaplaceParams params;
  double dt = 0.0;
  std::span<const std::size_t> nodes;  // nodes to update; all must be off the box faces
};

struct StepStats {
  std::size_t updated = 0;
  std::size_t non_monotone = 0;
  std::size_t first_non_monotone = kNoNode;  // smallest offending node index
  std::size_t first_non_finite = kNoNode;
};

/// One explicit Euler step of u_t = a_ij(grad u) u_ij with coefficients frozen
/// at `current`. Writes only the listed nodes of `next`. The mixed second
/// derivatives use the corner pair aligned with the sign of a_ij, which makes
/// every stencil weight non-negative whenever a_ii >= sum_{j != i} |a_ij| and
/// the time step satisfies the CFL bound.
StepStats step_omp(const StepInputs& in, std::span<const double> current, std::span<double> next);
StepStats step_serial(const StepInputs& in, std::span<const double> current, std::span<double> next);

struct Extrema {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

/// Min and max of values[level * stride + node] over the product of a level
/// range [first_level, last_level] and a node list.
Extrema extrema_omp(std::span<const double> values, std::size_t level_stride, int first_level,
                    int last_level, std::span<const std::size_t> nodes);
Extrema extrema_serial(std::span<const double> values, std::size_t level_stride, int first_level,
                       int last_level, std::span<const std::size_t> nodes);

}  // namespace plap::kernels
