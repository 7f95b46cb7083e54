#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>
#include <span>
#include <string>
#include <utility>

#include "plap/analytic.hpp"
#include "plap/calculus.hpp"
#include "plap/coeffs.hpp"
#include "plap/types.hpp"

namespace plap {

// ---------------------------------------------------------------------------
// Subsolution identity for phi = V^(p/2), V = |grad u|^2 + eps^2

struct IdentityReport {
  Point point{};
  double lhs_direct = 0.0;    // (d_t - a_ij d_ij) phi by the chain rule
  double rhs_identity = 0.0;  // p V^((p-6)/2) (p(2-p) (Delta_inf u)^2 - |D^2 u|^2 V^2)
  double relative_gap = 0.0;  // |lhs - rhs| / max(1, |lhs|, |rhs|)
  bool sign_ok = false;       // rhs <= 1e-10 max(1, |rhs|)
};

/// Evaluates both sides at `point` with u_t := a_ij(grad u) u_ij and
/// d_k u_t obtained by differentiating the equation.
/// Throws DomainError when eps = 0 and grad u vanishes.
IdentityReport subsolution_identity(const AnalyticField& field, const PLaplaceParams& params, const Point& point);

/// (Delta_inf u)^2 <= |D^2 u|^2 |grad u|^4 + 1e-12.
bool cauchy_schwarz_check(const GradHess& g);

/// p (2 - p) < 1, which holds for every p != 1.
bool identity_coefficient_below_one(double p);

// ---------------------------------------------------------------------------
// Pucci extremal operators

double pucci_minus(const SymMatrix& m, const EllipticityBounds& bounds);
double pucci_plus(const SymMatrix& m, const EllipticityBounds& bounds);

// ---------------------------------------------------------------------------
// Barrier psi(x, t) = min(delta^(-1/2) v(x) - t, 1), v(x) = sqrt((|x| - 1)^+)

/// Hessian of v at x, for 1 < |x|.
SymMatrix barrier_profile_hessian(const Point& x, int n);

/// pucci_minus(-D^2 v) at radius r > 1 minus 1, from the radial closed form.
double barrier_margin(double r, int n, const EllipticityBounds& bounds);

struct BarrierDelta {
  double delta = 0.0;
  double worst_margin = 0.0;  // min over sampled radii of pucci_minus(-D^2 v) - 1
};

/// Largest delta in {1/2, 1/4, ...} with pucci_minus(-D^2 v(r)) >= 1 at the
/// radii r_j = 1 + delta j / (samples + 1), j = 1..samples.
BarrierDelta barrier_find_delta(const EllipticityBounds& bounds, int n, int samples);

class BarrierSpec {
 public:
  BarrierSpec(double delta, int n, EllipticityBounds bounds);

  double delta() const { return delta_; }
  int dim() const { return n_; }
  const EllipticityBounds& bounds() const { return bounds_; }

  double profile(const Point& x) const;
  double psi(const Point& x, double t) const;

 private:
  double delta_;
  int n_;
  EllipticityBounds bounds_;
};

struct SpaceTimePoint {
  Point x{};
  double t = 0.0;
};

struct PsiReport {
  std::size_t zero_checked = 0;      // points in B_1 x {t = 0}
  std::size_t zero_failures = 0;
  std::size_t cap_checked = 0;       // points outside B_2 x [-1, 0], t <= 0
  std::size_t cap_failures = 0;
  std::size_t smooth_checked = 0;    // 1 < |x| < 1 + delta, t <= 0, psi < 1
  std::size_t smooth_failures = 0;
  double smooth_worst = 0.0;         // min of -1 + delta^(-1/2) pucci_minus(-D^2 v)
  std::string note = "supersolution inequality holds where psi < 1 and smooth; kink set not tested";

  bool holds() const { return zero_failures == 0 && cap_failures == 0 && smooth_failures == 0; }
};

/// Deterministic points with x in [-3, 3]^n and t in [-3, 0]; every fourth
/// point has t = 0 and |x| <= 1.
std::vector<SpaceTimePoint> barrier_sample_points(int n, std::size_t count, std::uint64_t seed);

PsiReport psi_properties(const BarrierSpec& spec, std::span<const SpaceTimePoint> points);

}  // namespace plap
