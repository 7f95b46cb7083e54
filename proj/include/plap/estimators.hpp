#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "plap/coeffs.hpp"
#include "plap/field.hpp"
#include "plap/grid.hpp"

namespace plap {

// ---------------------------------------------------------------------------
// Sampling helpers

/// Nodes of a cylinder at which the estimators evaluate discrete gradients:
/// closure nodes of `cyl` that are off the box faces and, when the field
/// carries a solve cylinder, whose whole stencil lies among the updated nodes
/// of that cylinder. Levels exclude the solve cylinder's initial level.
struct GradientSample {
  std::vector<std::size_t> nodes;
  int first_level = 0;
  int last_level = -1;

  std::size_t count() const {
    return last_level < first_level ? 0 : nodes.size() * static_cast<std::size_t>(last_level - first_level + 1);
  }
};

GradientSample gradient_sample(const SpaceTimeField& field, const ParabolicCylinder& cyl);

/// max - min of the field over the closure nodes of `cyl`. Throws
/// DomainError("empty cylinder") when no node falls inside.
double oscillation(const SpaceTimeField& field, const ParabolicCylinder& cyl);

/// The cylinder the field was solved on, or the one spanning its grid.
ParabolicCylinder reference_cylinder(const SpaceTimeField& field);

/// Sup of |grad_h u| over the gradient sample of the reference cylinder.
double sup_gradient(const SpaceTimeField& field, const ParabolicCylinder& cyl);

/// Copy of the field scaled so that sup |grad_h u| over the reference
/// cylinder equals 1. Returns the field and the scale factor applied.
std::pair<SpaceTimeField, double> normalize_gradient(const SpaceTimeField& field);

/// Multilinear interpolation in space, linear in time. (x, t) must lie in the grid box.
double interpolate(const SpaceTimeField& field, const Point& x, double t);

// ---------------------------------------------------------------------------
// Lipschitz ratio

struct LipschitzResult {
  double ratio = 0.0;
  double sup_gradient = 0.0;  // over Q_{1/2}
  double sup_abs = 0.0;       // ||u||_inf over Q_1
};

/// sup_{Q_{1/2}} |grad_h u| / (||u||_{L^inf(Q_1)} + eps), with Q_1 the
/// reference cylinder of the field.
LipschitzResult lipschitz_ratio(const SpaceTimeField& field, const PLaplaceParams& params);

// ---------------------------------------------------------------------------
// Hoelder fits

struct HolderFit {
  double alpha = 0.0;
  double C = 0.0;
  double residual = 0.0;  // max_i |C r_i^alpha / osc_i - 1|
  std::vector<double> radii;
  std::vector<double> oscillations;
};

/// Fits osc_{Q_r(x0,t0)} (du/dx_a), maxed over coordinate directions a,
/// against C r^alpha. Radii with zero oscillation are dropped; fewer than
/// three remaining throws DomainError("field locally constant").
HolderFit holder_fit_space(const SpaceTimeField& field, const Point& center, double t_top,
                           std::span<const double> radii);

struct TimeFit {
  double exponent = 0.0;             // slope of log |du| against log lag
  double exponent_sqrt_scale = 0.0;  // slope against log sqrt(lag) = 2 * exponent
  double C = 0.0;
  double residual = 0.0;
  std::vector<double> lags;
  std::vector<double> increments;
};

/// Fits |u(x, t_end) - u(x, t_end - lag)| against C lag^exponent at the node
/// nearest to x. Lags must be multiples of the grid time step.
TimeFit holder_fit_time(const SpaceTimeField& field, const Point& x, std::span<const double> lags);

// ---------------------------------------------------------------------------
// Improvement-of-oscillation cascade

/// (ell, mu, tau, delta) with derived rho = ell/4, W = 1 - ell + rho and
/// nu = c1 / (rho ell^2). c0 and c1 are not determined by the theory; they
/// default to 1 and only enter the w-bar diagnostic.
class OscCascadeParams {
 public:
  OscCascadeParams(double ell, double mu, double tau, double delta, double c0 = 1.0, double c1 = 1.0);

  double ell() const { return ell_; }
  double mu() const { return mu_; }
  double tau() const { return tau_; }
  double delta() const { return delta_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }

  double rho() const { return ell_ / 4.0; }
  double W() const { return 1.0 - ell_ + rho(); }
  double nu() const { return c1_ / (rho() * ell_ * ell_); }

 private:
  double ell_, mu_, tau_, delta_, c0_, c1_;
};

/// (1/nu) (1 - exp(nu (w - W))).
double wbar_transform(double w, const OscCascadeParams& c);

struct CascadeRecord {
  int level = 0;
  double radius = 0.0;      // tau^level
  double threshold = 0.0;   // ell (1 - delta)^level
  double fraction = 0.0;    // |{grad u . e <= threshold}| / |Q_{tau^level}|
  bool condition_held = false;  // fraction > mu
  double sup_next = 0.0;    // sup |grad u| over Q_{tau^(level+1)}
  double predicted = 0.0;   // (1 - delta)^(level+1)
};

struct CascadeResult {
  std::vector<CascadeRecord> records;
  std::optional<int> first_failure;  // first level whose condition fails
  bool truncated = false;            // stopped at an unresolvable level before K
};

/// Levels i = 0..K around the top centre of the reference cylinder. A level
/// is resolvable when Q_{tau^i} holds at least 27 gradient-sample nodes and
/// Q_{tau^(i+1)} at least one. Requires sup |grad_h u| <= 1 on the
/// reference cylinder (DomainError otherwise).
CascadeResult oscillation_cascade(const SpaceTimeField& field, const Point& e, const OscCascadeParams& c, int K);

struct RescaledField {
  SpaceTimeField field;
  double effective_eps = 0.0;          // eps (1 - delta)^(-k)
  double effective_eps_squared = 0.0;  // eps^2 (1 - delta)^(-2k)
};

/// v(x, t) = u(tau^k x, t0 + tau^(2k) (t - t0)) / (tau^k (1 - delta)^k) on the
/// same grid, about the top centre (0, t0) of the reference cylinder.
RescaledField rescale_cylinder(const SpaceTimeField& field, int k, const OscCascadeParams& c, double eps);

// ---------------------------------------------------------------------------
// Slice oscillation transfer and gradient smallness

struct SliceBound {
  double A = 0.0;                  // max over levels of spatial oscillation
  double full = 0.0;               // space-time oscillation
  double transfer_constant = 0.0;  // 10 n Lambda + 5
  bool applicable = false;         // A > 0
  bool pass = false;               // full <= constant * A + 1e-12
};

SliceBound slice_osc_transfer(const SpaceTimeField& field, const ParabolicCylinder& cyl,
                              const PLaplaceParams& params);

struct SmallnessParams {
  Point e{};  // unit direction
  double eps0 = 0.1;
  double eps1 = 0.05;
  double eta = 0.25;
  double gamma_reg = 0.5;  // recorded only
};

struct SmallnessResult {
  double fraction = 0.0;   // |{|grad u - e| > eps0}| / |Q|
  double best_a = 0.0;     // median of u - e.(x - x0) over Q_{r/2}
  double deviation = 0.0;  // max |u - a - e.(x - x0)| over Q_{r/2}
  bool hypothesis = false; // fraction <= eps1
  bool implication = false;  // hypothesis implies deviation <= eta
};

SmallnessResult gradient_smallness(const SpaceTimeField& field, const SmallnessParams& s,
                                   const ParabolicCylinder& cyl);

// ---------------------------------------------------------------------------
// Dichotomy

enum class DichotomyBranch { kStopped, kNested, kUnresolved };

struct DichotomyResult {
  DichotomyBranch branch = DichotomyBranch::kUnresolved;
  int stop_level = -1;
  Point stop_direction{};
  int levels_measured = 0;
  bool nesting_monotone = true;  // sup_next non-increasing across levels
  std::vector<SmallnessResult> smallness;  // one per swept triple, at the stop level
  bool implication_all = true;
  double effective_eps = 0.0;          // of the rescaled field at the stop level
  double effective_eps_squared = 0.0;
  std::vector<CascadeResult> cascades;  // one per direction
};

/// Runs the cascade in every direction of `directions`. The stopping level is
/// the first level whose condition fails in some direction; the rescaled
/// field at that level is then tested with each smallness triple. Without a
/// failure the nested suprema are checked for monotonicity.
DichotomyResult cascade_dichotomy(const SpaceTimeField& field, std::span<const Point> directions,
                                  const OscCascadeParams& c, int K, double eps,
                                  std::span<const SmallnessParams> sweep);

}  // namespace plap
