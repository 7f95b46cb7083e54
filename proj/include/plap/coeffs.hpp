#pragma once

#include <vector>

#include "plap/types.hpp"

namespace plap {

/// Exponent p in (1, inf), regularization eps >= 0 and spatial dimension n.
struct PLaplaceParams {
  double p = 2.0;
  double eps = 0.0;
  int n = 1;
};

/// Validating constructor; throws ConfigError("p must exceed 1") etc.
PLaplaceParams make_params(double p, double eps, int n);

struct EllipticityBounds {
  double lambda = 1.0;  // min(p-1, 1)
  double Lambda = 1.0;  // max(p-1, 1)
};

EllipticityBounds ellipticity_bounds(const PLaplaceParams& params);

/// a_ij(q) = delta_ij + (p-2) q_i q_j / (|q|^2 + eps^2).
/// Throws DomainError("degenerate gradient") for eps = 0 and q = 0.
SymMatrix coeff_matrix(const Point& q, const PLaplaceParams& params);

// Eigenvalue of a(q) along q; every orthogonal direction has eigenvalue 1.
double coeff_gradient_eigenvalue(const Point& q, const PLaplaceParams& params);

struct EigenCheck {
  bool within = false;
  std::vector<double> eigenvalues;  // ascending, n entries
  double margin = 0.0;              // min distance inside [lambda, Lambda]; negative if outside
};

/// Closed-form spectrum of a(q) from its rank-one structure, tested against
/// [lambda, Lambda] with absolute tolerance `tol`.
EigenCheck eigen_within_bounds(const Point& q, const PLaplaceParams& params, double tol = 1e-12);

}  // namespace plap
