#include "plap/solver.hpp"

#include <cmath>
#include <sstream>

#include "plap/error.hpp"
#include "plap/fit.hpp"

namespace plap {

double max_stable_dt(double h, const PLaplaceParams& params, double cfl_safety) {
  return cfl_safety * h * h / (2.0 * params.n * ellipticity_bounds(params).Lambda);
}

double dyadic_time_step(double h, const PLaplaceParams& params, double cfl_safety) {
  return std::exp2(std::floor(std::log2(max_stable_dt(h, params, cfl_safety))));
}

SolveConfig make_solve_config(const Grid& grid, const PLaplaceParams& params, double cfl_safety,
                              bool monotonicity_check, int record_stride) {
  if (params.n != grid.dim()) throw ConfigError("parameter dimension does not match the grid");
  if (!(params.eps > 0.0)) throw ConfigError("the solver requires eps > 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
  const double limit = max_stable_dt(grid.h(), params, cfl_safety);
  if (grid.dt() > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "CFL violated: dt = " << grid.dt() << " exceeds cfl_safety*h^2/(2 n Lambda) = " << limit;
    throw ConfigError(os.str());
  }
  if (record_stride < 1 || (grid.levels() - 1) % record_stride != 0)
    throw ConfigError("record_stride must divide the number of time steps");
  return {grid, params, cfl_safety, monotonicity_check, record_stride};
}

ParabolicCylinder spanning_cylinder(const Grid& grid) {
  return {Point{}, grid.t_end(), std::sqrt(grid.t_end() - grid.t_begin())};
}

ExplicitStepper::ExplicitStepper(SolveConfig config, BoundaryPtr boundary, const ParabolicCylinder& cylinder)
    : config_(std::move(config)), boundary_(std::move(boundary)) {
  const Grid& grid = config_.grid;
  const double base = cylinder.t_top - cylinder.radius * cylinder.radius;
  if (std::abs(cylinder.t_top - grid.t_end()) > 0.5 * grid.dt() ||
      std::abs(base - grid.t_begin()) > 0.5 * grid.dt())
    throw ConfigError("solve cylinder must span the grid time interval");

  const CylinderNodes nodes = cylinder_nodes(grid, cylinder);
  core_ = nodes.core;
  for (const std::size_t node : core_)
    if (!grid.off_faces(node)) throw ConfigError("solve cylinder reaches the grid box faces");

  std::vector<bool> is_core(grid.node_count(), false);
  for (const std::size_t node : core_) is_core[node] = true;
  std::vector<Point> points;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    if (is_core[node]) continue;
    dirichlet_.push_back(node);
    points.push_back(grid.point(node));
  }
  scratch_.resize(dirichlet_.size());
  sampler_ = boundary_->sampler(std::move(points));
}

void ExplicitStepper::initialize(std::span<double> level0) const {
  const Grid& grid = config_.grid;
  for (std::size_t node = 0; node < grid.node_count(); ++node)
    level0[node] = boundary_->value(grid.point(node), grid.time(0));
}

kernels::StepStats ExplicitStepper::step(std::span<const double> current, std::span<double> next, int m) const {
  const Grid& grid = config_.grid;
  const kernels::StepInputs in{&grid, config_.params, grid.dt(), core_};
  const auto stats = kernels::step_omp(in, current, next);

  if (stats.first_non_finite != kernels::kNoNode) {
    std::ostringstream os;
    os << "blow-up: non-finite value at node " << stats.first_non_finite << ", level " << m + 1;
    throw NumericalError(os.str());
  }
  if (config_.monotonicity_check && stats.non_monotone > 0) {
    const std::size_t node = stats.first_non_monotone;
    std::ostringstream os;
    os.precision(17);
    os << "non-monotone stencil at node " << node << " (level " << m << "), p = " << config_.params.p
       << ", grad_h u = (";
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t s = grid.stride(a);
      os << (a ? ", " : "") << (current[node + s] - current[node - s]) / (2.0 * grid.h());
    }
    os << "); " << stats.non_monotone << " node(s) affected";
    throw NumericalError(os.str());
  }

  sampler_->fill(grid.time(m + 1), scratch_);
  for (std::size_t i = 0; i < dirichlet_.size(); ++i) next[dirichlet_[i]] = scratch_[i];
  return stats;
}

Solution solve(const SolveConfig& config, BoundaryPtr boundary, const ParabolicCylinder& cylinder) {
  const ExplicitStepper stepper(config, std::move(boundary), cylinder);
  const Grid& grid = config.grid;
  Solution out{SpaceTimeField(grid.coarsened_in_time(config.record_stride)), {}};
  out.field.set_domain(cylinder);

  std::vector<double> current(grid.node_count());
  std::vector<double> next(grid.node_count());
  stepper.initialize(current);
  std::copy(current.begin(), current.end(), out.field.level(0).begin());

  for (int m = 0; m + 1 < grid.levels(); ++m) {
    const auto stats = stepper.step(current, next, m);
    out.monotonicity.node_updates += stats.updated;
    out.monotonicity.non_monotone += stats.non_monotone;
    current.swap(next);
    if ((m + 1) % config.record_stride == 0) {
      auto dst = out.field.level((m + 1) / config.record_stride);
      std::copy(current.begin(), current.end(), dst.begin());
    }
  }
  return out;
}

ComparisonResult comparison_check(const SpaceTimeField& u, const SpaceTimeField& v, double tol) {
  const Grid& grid = u.grid();
  if (!grid.same_as(v.grid())) throw DomainError("comparison_check: fields live on different grids");
  if (!u.domain() || !v.domain()) throw DomainError("comparison_check: fields carry no solve cylinder");
  const auto& cu = *u.domain();
  const auto& cv = *v.domain();
  if (cu.center != cv.center || cu.radius != cv.radius || cu.t_top != cv.t_top)
    throw DomainError("comparison_check: fields were solved on different cylinders");

  std::vector<bool> is_core(grid.node_count(), false);
  for (const std::size_t node : cylinder_nodes(grid, cu).core) is_core[node] = true;

  ComparisonResult r;
  r.boundary_ordered = true;
  r.worst_violation = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < grid.levels(); ++m) {
    const auto lu = u.level(m);
    const auto lv = v.level(m);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      const double gap = lu[node] - lv[node];
      const bool on_boundary = m == 0 || !is_core[node];
      if (on_boundary && gap > tol) r.boundary_ordered = false;
      r.worst_violation = std::max(r.worst_violation, gap);
      if (gap > tol) ++r.violations;
    }
  }
  r.holds = !r.boundary_ordered || r.violations == 0;
  return r;
}

ConvergenceResult convergence_study(const PLaplaceParams& params, std::span<const double> h_levels,
                                    ManufacturedSolution kind, double cfl_safety) {
  if (h_levels.size() < 3) throw ConfigError("convergence study needs at least 3 refinement levels");
  const int n = params.n;
  const double drift = 2.0 * n + 2.0 * (params.p - 2.0);
  const Point e{0.6, -0.8, 0.5};
  auto exact = [&](const Point& x, double t) {
    if (kind == ManufacturedSolution::kLinear) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += e[a] * x[a];
      return s;
    }
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    return r2 + drift * t;
  };
  const auto boundary = make_function_boundary(exact);

  ConvergenceResult result;
  std::vector<double> log_h, log_err;
  for (const double h : h_levels) {
    const double dt = dyadic_time_step(h, params, cfl_safety);
    const Grid grid = make_grid(n, 1.0, h, dt, -1.0, 0.0);
    const int steps = grid.levels() - 1;
    const auto config = make_solve_config(grid, params, cfl_safety, true, steps);
    const auto cylinder = spanning_cylinder(grid);
    const auto solution = solve(config, boundary, cylinder);
    const auto final_level = solution.field.level(1);
    double err = 0.0;
    for (const std::size_t node : cylinder_nodes(grid, cylinder).core)
      err = std::max(err, std::abs(final_level[node] - exact(grid.point(node), grid.t_end())));
    result.rows.push_back({h, dt, err});
    log_h.push_back(std::log(h));
    log_err.push_back(std::log(err));
  }
  result.exact = true;
  for (const auto& row : result.rows) result.exact = result.exact && row.max_error <= 1e-12;
  result.order = result.exact ? std::numeric_limits<double>::infinity()
                              : least_squares_line(log_h, log_err).slope;
  return result;
}

}  // namespace plap
