#pragma once

#include <cstddef>
#include <optional>

#include "plap/coeffs.hpp"
#include "plap/field.hpp"
#include "plap/types.hpp"

namespace plap {

/// First and second spatial derivatives at a point, optionally with u_t.
struct GradHess {
  Point gradient{};
  SymMatrix hessian;
  std::optional<double> time_derivative;

  int dim() const { return hessian.dim(); }
};

// Central second-order differences. Both throw DomainError("one-sided node")
// when the node sits on a box face.
Point gradient(const SpaceTimeField& field, std::size_t node, int level);
SymMatrix hessian(const SpaceTimeField& field, std::size_t node, int level);

/// Gradient and Hessian at (node, level); with `with_time` also u_t by
/// backward difference, which throws DomainError at level 0.
GradHess grad_hess(const SpaceTimeField& field, std::size_t node, int level, bool with_time = false);

/// Grad u . (Hess u) grad u.
double infinity_laplacian(const GradHess& g);

/// u_t - a_ij(grad u) u_ij. Requires g.time_derivative.
double pde_residual(const GradHess& g, const PLaplaceParams& params);

/// (|grad u|^2 + eps^2)^(p/2).
double phi_field(const GradHess& g, const PLaplaceParams& params);

}  // namespace plap
