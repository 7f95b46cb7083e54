#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "plap/boundary_data.hpp"
#include "plap/calculus.hpp"
#include "plap/error.hpp"
#include "plap/kernels.hpp"
#include "plap/rng.hpp"
#include "plap/solver.hpp"

using namespace plap;

namespace {

std::vector<std::size_t> interior_nodes(const Grid& g) {
  std::vector<std::size_t> out;
  for (std::size_t node = 0; node < g.node_count(); ++node)
    if (g.off_faces(node)) out.push_back(node);
  return out;
}

SolveConfig config_for(int n, double h, double p, double eps, int stride = 1) {
  const auto params = make_params(p, eps, n);
  const Grid g = make_grid(n, 1.0, h, dyadic_time_step(h, params, 0.9), -1.0, 0.0);
  return make_solve_config(g, params, 0.9, true, stride);
}

Solution run(const SolveConfig& c, BoundaryPtr g) { return solve(c, std::move(g), spanning_cylinder(c.grid)); }

}  // namespace

TEST(Kernels, OmpMatchesSerial) {
  for (int n = 1; n <= 3; ++n) {
    const double h = n == 3 ? 0.125 : 0.0625;
    const auto params = make_params(n == 2 ? 4.0 : 1.5, 0.05, n);
    const Grid g = make_grid(n, 1.0, h, dyadic_time_step(h, params, 0.9), -1.0, 0.0);
    SplitMix64 rng(n);
    std::vector<double> u(g.node_count());
    for (auto& v : u) v = rng.uniform(-1, 1);
    const auto nodes = interior_nodes(g);
    kernels::StepInputs in{&g, params, g.dt(), nodes};
    std::vector<double> a(u.size(), 0.0), b(u.size(), 0.0);
    const auto sa = kernels::step_omp(in, u, a);
    const auto sb = kernels::step_serial(in, u, b);
    EXPECT_EQ(sa.updated, sb.updated);
    EXPECT_EQ(sa.non_monotone, sb.non_monotone);
    EXPECT_EQ(sa.first_non_monotone, sb.first_non_monotone);
    for (auto node : nodes) EXPECT_NEAR(a[node], b[node], 1e-13) << "n=" << n;
  }
}

TEST(Kernels, OmpIndependentOfThreadCount) {
  const auto params = make_params(3.0, 0.01, 2);
  const Grid g = make_grid(2, 1.0, 1.0 / 32, dyadic_time_step(1.0 / 32, params, 0.9), -1.0, 0.0);
  SplitMix64 rng(9);
  std::vector<double> u(g.node_count());
  for (auto& v : u) v = rng.uniform(-1, 1);
  const auto nodes = interior_nodes(g);
  kernels::StepInputs in{&g, params, g.dt(), nodes};
  std::vector<double> a(u.size(), 0.0), b(u.size(), 0.0);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto sa = kernels::step_omp(in, u, a);
  omp_set_num_threads(4);
  const auto sb = kernels::step_omp(in, u, b);
  omp_set_num_threads(saved);
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa.non_monotone, sb.non_monotone);
  EXPECT_EQ(sa.first_non_monotone, sb.first_non_monotone);

  const auto ea = kernels::extrema_omp(u, g.node_count(), 0, 0, nodes);
  const auto eb = kernels::extrema_serial(u, g.node_count(), 0, 0, nodes);
  EXPECT_EQ(ea.min, eb.min);
  EXPECT_EQ(ea.max, eb.max);
  EXPECT_EQ(ea.count, eb.count);
}

TEST(Kernels, DetectsNegativeWeights) {
  // In 2D, a_00 >= |a_01| fails for p = 10 along the direction at 3 pi / 8.
  const auto params = make_params(10.0, 0.01, 2);
  const Grid g = make_grid(2, 1.0, 0.25, 1.0 / 1024, -1.0, 0.0);
  const double th = 3.0 * M_PI / 8.0;
  const auto u = sample_field(g, [&](const Point& x, double) { return std::cos(th) * x[0] + std::sin(th) * x[1]; });
  const auto nodes = interior_nodes(g);
  kernels::StepInputs in{&g, params, g.dt(), nodes};
  std::vector<double> out(g.node_count());
  const auto st = kernels::step_omp(in, u.level(0), out);
  EXPECT_EQ(st.non_monotone, nodes.size());
  EXPECT_EQ(st.first_non_monotone, nodes.front());
}

TEST(Solver, ConfigValidation) {
  const auto params = make_params(3.0, 0.01, 2);
  const double h = 0.125;
  const Grid ok = make_grid(2, 1.0, h, dyadic_time_step(h, params, 0.9), -1.0, 0.0);
  EXPECT_NO_THROW(make_solve_config(ok, params));
  const Grid too_big = make_grid(2, 1.0, h, 1.0 / 64, -1.0, 0.0);
  EXPECT_GT(too_big.dt(), max_stable_dt(h, params, 0.9));
  EXPECT_THROW(make_solve_config(too_big, params), ConfigError);
  EXPECT_THROW(make_solve_config(ok, make_params(3.0, 0.0, 2)), ConfigError);
  EXPECT_THROW(make_solve_config(ok, params, 1.5), ConfigError);
  EXPECT_THROW(make_solve_config(ok, params, 0.9, true, 3), ConfigError);
  EXPECT_THROW(make_solve_config(ok, make_params(3.0, 0.01, 3)), ConfigError);
  EXPECT_LE(dyadic_time_step(h, params, 0.9), max_stable_dt(h, params, 0.9));
  EXPECT_GT(2.0 * dyadic_time_step(h, params, 0.9), max_stable_dt(h, params, 0.9));
}

TEST(Solver, CylinderMustFitBox) {
  const auto c = config_for(2, 0.125, 2.0, 0.1);
  const auto g = make_function_boundary([](const Point&, double) { return 0.0; });
  EXPECT_THROW(ExplicitStepper(c, g, {{0, 0, 0}, 0.0, 1.2}), ConfigError);
  EXPECT_THROW(ExplicitStepper(c, g, {{0, 0, 0}, 0.0, 0.5}), ConfigError);
}

TEST(Solver, LinearDataReproducedExactly) {
  for (int n = 1; n <= 3; ++n) {
    const auto c = config_for(n, n == 3 ? 0.25 : 0.125, 3.0, 0.01);
    const Point e{0.5, -0.25, 0.75};
    const auto sol = run(c, make_function_boundary([&](const Point& x, double) { return dot(e, x); }));
    const Grid& g = sol.field.grid();
    for (int m = 0; m < g.levels(); m += 7)
      for (std::size_t node = 0; node < g.node_count(); ++node)
        ASSERT_NEAR(sol.field.at(node, m), dot(e, g.point(node)), 1e-13);
  }
}

TEST(Solver, ConstantDataStaysConstant) {
  const auto c = config_for(2, 0.125, 1.5, 0.01);
  const auto sol = run(c, make_function_boundary([](const Point&, double) { return 0.375; }));
  for (double v : sol.field.values()) ASSERT_EQ(v, 0.375);
  EXPECT_EQ(sol.monotonicity.pass_rate(), 1.0);
  EXPECT_GT(sol.monotonicity.node_updates, 0u);
}

TEST(Solver, MaximumPrinciple) {
  const auto c = config_for(2, 0.0625, 1.5, 0.01);
  const auto data = generate_boundary_data(4, 2, 2);
  const auto sol = run(c, data);
  const Grid& g = sol.field.grid();
  const auto cyl = *sol.field.domain();
  const auto cn = cylinder_nodes(g, cyl);
  double lo = 1e300, hi = -1e300;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    lo = std::min(lo, sol.field.at(node, 0));
    hi = std::max(hi, sol.field.at(node, 0));
  }
  for (int m = 1; m < g.levels(); ++m)
    for (std::size_t node : cn.shell) {
      lo = std::min(lo, sol.field.at(node, m));
      hi = std::max(hi, sol.field.at(node, m));
    }
  for (int m = 0; m < g.levels(); ++m)
    for (std::size_t node : cn.core) {
      ASSERT_GE(sol.field.at(node, m), lo - 1e-12);
      ASSERT_LE(sol.field.at(node, m), hi + 1e-12);
    }
}

TEST(Solver, ConstantShift) {
  const auto c = config_for(2, 0.125, 3.0, 0.05);
  const auto data = generate_boundary_data(8, 2, 2);
  const auto a = run(c, data);
  const auto b = run(c, make_combined_boundary(data, 1.0, data, 0.0, 0.5));
  for (std::size_t i = 0; i < a.field.values().size(); ++i)
    ASSERT_NEAR(b.field.values()[i], a.field.values()[i] + 0.5, 1e-12);
}

TEST(Solver, MonotoneUnderPerturbation) {
  const auto params = make_params(3.0, 0.05, 2);
  const Grid g = make_grid(2, 1.0, 0.125, dyadic_time_step(0.125, params, 0.9), -1.0, 0.0);
  const auto u = sample_field(g, [](const Point& x, double) { return std::sin(2 * x[0] + x[1]); });
  const auto nodes = interior_nodes(g);
  kernels::StepInputs in{&g, params, g.dt(), nodes};
  std::vector<double> base(g.node_count());
  kernels::step_omp(in, u.level(0), base);
  SplitMix64 rng(12);
  for (int s = 0; s < 50; ++s) {
    std::vector<double> bumped(u.level(0).begin(), u.level(0).end());
    const std::size_t target = nodes[rng.integer(0, static_cast<long>(nodes.size()) - 1)];
    bumped[target] += 1e-9;
    std::vector<double> out(g.node_count());
    kernels::step_omp(in, bumped, out);
    // Frozen-coefficient monotonicity holds only to first order in the bump.
    for (auto node : nodes) ASSERT_GE(out[node] - base[node], -1e-15);
  }
}

TEST(Solver, Deterministic) {
  const auto c = config_for(2, 0.0625, 3.0, 0.01);
  const auto data = generate_boundary_data(1, 2, 2);
  const auto a = run(c, data);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(3);
  const auto b = run(c, data);
  omp_set_num_threads(saved);
  ASSERT_EQ(a.field.values().size(), b.field.values().size());
  for (std::size_t i = 0; i < a.field.values().size(); ++i) ASSERT_EQ(a.field.values()[i], b.field.values()[i]);
}

TEST(Solver, RecordStrideKeepsEveryKthLevel) {
  const auto full = config_for(2, 0.125, 2.0, 0.1, 1);
  const auto coarse = config_for(2, 0.125, 2.0, 0.1, 4);
  const auto data = generate_boundary_data(2, 2, 2);
  const auto a = run(full, data);
  const auto b = run(coarse, data);
  ASSERT_EQ(b.field.grid().levels() - 1, (a.field.grid().levels() - 1) / 4);
  for (int m = 0; m < b.field.grid().levels(); ++m)
    for (std::size_t node = 0; node < a.field.grid().node_count(); ++node)
      ASSERT_EQ(b.field.at(node, m), a.field.at(node, 4 * m));
}

TEST(Solver, NonMonotoneAbort) {
  const auto params = make_params(10.0, 0.01, 2);
  const double h = 0.125;
  const Grid g = make_grid(2, 1.0, h, dyadic_time_step(h, params, 0.9), -1.0, 0.0);
  const auto c = make_solve_config(g, params);
  const double th = 3.0 * M_PI / 8.0;
  const auto skew = make_function_boundary([&](const Point& x, double) { return std::cos(th) * x[0] + std::sin(th) * x[1]; });
  try {
    run(c, skew);
    FAIL() << "expected a non-monotone abort";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("non-monotone stencil"), std::string::npos);
  }
  const auto unchecked = make_solve_config(g, params, 0.9, false);
  const auto sol = run(unchecked, skew);
  EXPECT_LT(sol.monotonicity.pass_rate(), 1.0);
}

TEST(Comparison, Examples) {
  const auto c = config_for(2, 0.0625, 3.0, 0.01);
  const auto data = generate_boundary_data(3, 2, 2);
  const auto u = run(c, data);
  const auto v = run(c, make_combined_boundary(data, 1.0, data, 0.0, 1.0));
  auto r = comparison_check(u.field, v.field);
  EXPECT_TRUE(r.boundary_ordered);
  EXPECT_TRUE(r.holds);
  r = comparison_check(u.field, u.field);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.worst_violation, 0.0);
  r = comparison_check(v.field, u.field);
  EXPECT_FALSE(r.boundary_ordered);

  const auto other = run(config_for(2, 0.125, 3.0, 0.01), data);
  EXPECT_THROW(comparison_check(u.field, other.field), DomainError);
}

TEST(Comparison, RandomOrderedPairs) {
  for (double p : {1.5, 3.0}) {
    const auto c = config_for(2, 0.125, p, 0.01);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto gu = generate_boundary_data(s, 2, 2);
      const auto w = generate_boundary_data(~s, 2, 2);
      const auto u = run(c, gu);
      const auto v = run(c, make_combined_boundary(gu, 1.0, w, 0.025, 0.075));
      const auto r = comparison_check(u.field, v.field);
      EXPECT_TRUE(r.boundary_ordered);
      EXPECT_TRUE(r.holds) << "worst " << r.worst_violation;
    }
  }
}

TEST(Convergence, LinearIsExact) {
  const std::vector<double> hs{0.25, 0.125, 0.0625};
  const auto r = convergence_study(make_params(3.0, 1e-6, 2), hs, ManufacturedSolution::kLinear);
  EXPECT_TRUE(r.exact);
  for (const auto& row : r.rows) EXPECT_LE(row.max_error, 1e-12);
}

TEST(Convergence, NeedsThreeLevels) {
  const std::vector<double> hs{0.25, 0.125};
  EXPECT_THROW(convergence_study(make_params(3.0, 1e-6, 2), hs, ManufacturedSolution::kQuadratic), ConfigError);
}

TEST(Convergence, QuadraticSecondOrderBelowTwo) {
  const std::vector<double> hs{0.125, 0.0625, 0.03125};
  const auto r = convergence_study(make_params(1.5, 1e-6, 2), hs, ManufacturedSolution::kQuadratic);
  EXPECT_FALSE(r.exact);
  EXPECT_GE(r.order, 1.8);
  EXPECT_LE(r.rows.back().max_error, 1e-3);
}

// For p > 2 the error concentrates at the node where grad_h u = 0: the
// frozen coefficient there is the identity while the exact solution moves
// with the p-dependent rate.
TEST(Convergence, QuadraticErrorLocalizedAtCriticalPoint) {
  const auto params = make_params(3.0, 1e-6, 2);
  const double h = 0.0625;
  const Grid g = make_grid(2, 1.0, h, dyadic_time_step(h, params, 0.9), -1.0, 0.0);
  const double rate = 2.0 * 2 + 2.0 * (params.p - 2.0);
  auto exact = [&](const Point& x, double t) { return dot(x, x) + rate * t; };
  const auto sol = solve(make_solve_config(g, params, 0.9, true, g.levels() - 1), make_function_boundary(exact),
                         spanning_cylinder(g));
  const Grid& rg = sol.field.grid();
  const int top = rg.levels() - 1;
  double worst = 0.0, far = 0.0;
  Point worst_at{};
  for (std::size_t node = 0; node < rg.node_count(); ++node) {
    const Point x = rg.point(node);
    const double err = std::abs(sol.field.at(node, top) - exact(x, 0.0));
    if (err > worst) {
      worst = err;
      worst_at = x;
    }
    if (norm(x) >= 0.5) far = std::max(far, err);
  }
  EXPECT_EQ(norm(worst_at), 0.0);
  EXPECT_GT(worst, 2.0 * far);
}
