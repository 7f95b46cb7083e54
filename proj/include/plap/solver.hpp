#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "plap/boundary_data.hpp"
#include "plap/coeffs.hpp"
#include "plap/field.hpp"
#include "plap/grid.hpp"
#include "plap/kernels.hpp"

namespace plap {

/// Compute grid, equation parameters and stepping options.
/// `record_stride` keeps every k-th level in the returned trajectory.
struct SolveConfig {
  Grid grid;
  PLaplaceParams params;
  double cfl_safety = 0.9;
  bool monotonicity_check = true;
  int record_stride = 1;
};

// cfl_safety * h^2 / (2 n Lambda).
double max_stable_dt(double h, const PLaplaceParams& params, double cfl_safety);
// Largest power of two not exceeding max_stable_dt.
double dyadic_time_step(double h, const PLaplaceParams& params, double cfl_safety);

/// Validates eps > 0, cfl_safety in (0, 1], the CFL bound on grid.dt() and
/// the record stride. Throws ConfigError.
SolveConfig make_solve_config(const Grid& grid, const PLaplaceParams& params, double cfl_safety = 0.9,
                              bool monotonicity_check = true, int record_stride = 1);

/// Q_r(0, t_end) with r^2 = t_end - t_begin: the cylinder spanning the grid.
ParabolicCylinder spanning_cylinder(const Grid& grid);

struct MonotonicityStats {
  std::size_t node_updates = 0;
  std::size_t non_monotone = 0;
  double pass_rate() const {
    return node_updates == 0 ? 1.0
                             : 1.0 - static_cast<double>(non_monotone) / static_cast<double>(node_updates);
  }
};

/// Explicit Euler stepping on a cylinder: core nodes are advanced by the
/// scheme, every other node of the box is overwritten with the Dirichlet data.
class ExplicitStepper {
 public:
  ExplicitStepper(SolveConfig config, BoundaryPtr boundary, const ParabolicCylinder& cylinder);

  const SolveConfig& config() const { return config_; }
  std::span<const std::size_t> updated_nodes() const { return core_; }
  std::span<const std::size_t> dirichlet_nodes() const { return dirichlet_; }

  /// Fills every node of level 0 from the data.
  void initialize(std::span<double> level0) const;

  /// Advances level m to level m + 1. Throws NumericalError on non-finite
  /// values or, with the check enabled, on a negative stencil weight.
  kernels::StepStats step(std::span<const double> current, std::span<double> next, int m) const;

 private:
  SolveConfig config_;
  BoundaryPtr boundary_;
  std::vector<std::size_t> core_;
  std::vector<std::size_t> dirichlet_;
  std::unique_ptr<BoundarySampler> sampler_;
  mutable std::vector<double> scratch_;
};

struct Solution {
  SpaceTimeField field;  // on config.grid coarsened by record_stride
  MonotonicityStats monotonicity;
};

Solution solve(const SolveConfig& config, BoundaryPtr boundary, const ParabolicCylinder& cylinder);

struct ComparisonResult {
  bool boundary_ordered = false;  // v - u >= -tol on every Dirichlet node
  bool holds = false;             // ordering everywhere (vacuously true if not boundary_ordered)
  double worst_violation = 0.0;   // max over all nodes of u - v
  std::size_t violations = 0;     // nodes with u - v > tol
};

/// Checks u <= v everywhere given u <= v on the parabolic boundary of the
/// common solve cylinder. Throws DomainError on mismatched grids or domains.
ComparisonResult comparison_check(const SpaceTimeField& u, const SpaceTimeField& v, double tol = 1e-12);

enum class ManufacturedSolution { kLinear, kQuadratic };

struct ConvergenceRow {
  double h = 0.0;
  double dt = 0.0;
  double max_error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double order = 0.0;  // least-squares slope of log error vs log h
  bool exact = false;  // every error <= 1e-12; order is then not meaningful
};

/// Solves on Q_1 = B_1 x (-1, 0] with data from the closed-form solution
///   linear:    e . x
///   quadratic: |x|^2 + (2n + 2(p - 2)) t
/// and reports the final-time max error over updated nodes.
ConvergenceResult convergence_study(const PLaplaceParams& params, std::span<const double> h_levels,
                                    ManufacturedSolution kind, double cfl_safety = 0.9);

}  // namespace plap
