#include "plap/coeffs.hpp"

#include <algorithm>
#include <cmath>

#include "plap/error.hpp"

namespace plap {

PLaplaceParams make_params(double p, double eps, int n) {
  if (!std::isfinite(p) || !(p > 1.0)) throw ConfigError("p must exceed 1");
  if (!std::isfinite(eps) || eps < 0.0) throw ConfigError("eps must be non-negative");
  if (n < 1 || n > kMaxDim) throw ConfigError("dimension must be 1, 2 or 3");
  return {p, eps, n};
}

EllipticityBounds ellipticity_bounds(const PLaplaceParams& params) {
  return {std::min(params.p - 1.0, 1.0), std::max(params.p - 1.0, 1.0)};
}

SymMatrix coeff_matrix(const Point& q, const PLaplaceParams& params) {
  const double denom = dot(q, q) + params.eps * params.eps;
  if (denom == 0.0) throw DomainError("degenerate gradient: eps = 0 and q = 0");
  const double scale = (params.p - 2.0) / denom;
  SymMatrix a(params.n);
  for (int i = 0; i < params.n; ++i)
    for (int j = i; j < params.n; ++j)
      a.set(i, j, (i == j ? 1.0 : 0.0) + scale * q[i] * q[j]);
  return a;
}

double coeff_gradient_eigenvalue(const Point& q, const PLaplaceParams& params) {
  const double q2 = dot(q, q);
  const double denom = q2 + params.eps * params.eps;
  if (denom == 0.0) throw DomainError("degenerate gradient: eps = 0 and q = 0");
  return 1.0 + (params.p - 2.0) * q2 / denom;
}

EigenCheck eigen_within_bounds(const Point& q, const PLaplaceParams& params, double tol) {
  const auto bounds = ellipticity_bounds(params);
  EigenCheck out;
  out.eigenvalues.assign(static_cast<std::size_t>(params.n), 1.0);
  out.eigenvalues.back() = coeff_gradient_eigenvalue(q, params);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.margin = std::min(out.eigenvalues.front() - bounds.lambda, bounds.Lambda - out.eigenvalues.back());
  out.within = out.margin >= -tol;
  return out;
}

}  // namespace plap
