#include "plap/calculus.hpp"

#include <cmath>
#include <sstream>

#include "plap/error.hpp"

namespace plap {
namespace {

void require_off_faces(const Grid& grid, std::size_t node) {
  if (!grid.off_faces(node)) {
    std::ostringstream os;
    os << "one-sided node " << node << ": central stencil leaves the grid box";
    throw DomainError(os.str());
  }
}

}  // namespace

SpaceTimeField sample_field(const Grid& grid, const std::function<double(const Point&, double)>& f) {
  SpaceTimeField field(grid);
  for (int m = 0; m < grid.levels(); ++m) {
    const double t = grid.time(m);
    auto values = field.level(m);
    for (std::size_t node = 0; node < grid.node_count(); ++node) values[node] = f(grid.point(node), t);
  }
  return field;
}

Point gradient(const SpaceTimeField& field, std::size_t node, int level) {
  const Grid& grid = field.grid();
  require_off_faces(grid, node);
  const auto u = field.level(level);
  Point g{};
  for (int a = 0; a < grid.dim(); ++a) {
    const std::size_t s = grid.stride(a);
    g[a] = (u[node + s] - u[node - s]) / (2.0 * grid.h());
  }
  return g;
}

SymMatrix hessian(const SpaceTimeField& field, std::size_t node, int level) {
  const Grid& grid = field.grid();
  require_off_faces(grid, node);
  const auto u = field.level(level);
  const double h2 = grid.h() * grid.h();
  SymMatrix hess(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    const std::size_t sa = grid.stride(a);
    hess.set(a, a, (u[node + sa] - 2.0 * u[node] + u[node - sa]) / h2);
    for (int b = a + 1; b < grid.dim(); ++b) {
      const std::size_t sb = grid.stride(b);
      const double corners = u[node + sa + sb] - u[node + sa - sb] - u[node - sa + sb] + u[node - sa - sb];
      hess.set(a, b, corners / (4.0 * h2));
    }
  }
  return hess;
}

GradHess grad_hess(const SpaceTimeField& field, std::size_t node, int level, bool with_time) {
  GradHess g{gradient(field, node, level), hessian(field, node, level), std::nullopt};
  if (with_time) {
    if (level == 0) throw DomainError("time derivative needs a previous level");
    g.time_derivative = (field.at(node, level) - field.at(node, level - 1)) / field.grid().dt();
  }
  return g;
}

double infinity_laplacian(const GradHess& g) { return dot(g.gradient, g.hessian.apply(g.gradient)); }

double pde_residual(const GradHess& g, const PLaplaceParams& params) {
  if (!g.time_derivative) throw DomainError("pde_residual needs a time derivative");
  return *g.time_derivative - coeff_matrix(g.gradient, params).contract(g.hessian);
}

double phi_field(const GradHess& g, const PLaplaceParams& params) {
  const double v = dot(g.gradient, g.gradient) + params.eps * params.eps;
  return std::pow(v, 0.5 * params.p);
}

}  // namespace plap
