#include "plap/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plap/error.hpp"
#include "plap/rng.hpp"

namespace plap {

IdentityReport subsolution_identity(const AnalyticField& field, const PLaplaceParams& params, const Point& point) {
  const int n = field.dim();
  const double p = params.p;
  const Point g = field.gradient(point);
  const SymMatrix H = field.hessian(point);
  const Tensor3 T = field.third(point);
  const double V = dot(g, g) + params.eps * params.eps;
  if (!(V > 0.0)) throw DomainError("degenerate gradient: eps = 0 and grad u = 0");

  const SymMatrix a = coeff_matrix(g, params);
  const Point w = H.apply(g);  // D^2u grad u
  const double dinf = dot(g, w);

  // d_k u_t = (d_k a_ij) u_ij + a_ij u_ijk
  Point dut{};
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double da = (p - 2.0) * ((H(i, k) * g[j] + g[i] * H(j, k)) / V - g[i] * g[j] * 2.0 * w[k] / (V * V));
        s += da * H(i, j) + a(i, j) * T(i, j, k);
      }
    }
    dut[k] = s;
  }
  const double vp2 = std::pow(V, 0.5 * (p - 2.0));
  const double vp4 = std::pow(V, 0.5 * (p - 4.0));
  const double phi_t = p * vp2 * dot(g, dut);

  double a_phi = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double hh = 0.0, gt = 0.0;
      for (int k = 0; k < n; ++k) {
        hh += H(k, i) * H(k, j);
        gt += g[k] * T(k, i, j);
      }
      const double phi_ij = p * (p - 2.0) * vp4 * w[i] * w[j] + p * vp2 * (hh + gt);
      a_phi += a(i, j) * phi_ij;
    }
  }

  IdentityReport r;
  r.point = point;
  r.lhs_direct = phi_t - a_phi;
  r.rhs_identity = p * std::pow(V, 0.5 * (p - 6.0)) * (p * (2.0 - p) * dinf * dinf - H.frobenius_sq() * V * V);
  r.relative_gap = std::abs(r.lhs_direct - r.rhs_identity) /
                   std::max({1.0, std::abs(r.lhs_direct), std::abs(r.rhs_identity)});
  r.sign_ok = r.rhs_identity <= 1e-10 * std::max(1.0, std::abs(r.rhs_identity));
  return r;
}

bool cauchy_schwarz_check(const GradHess& g) {
  const double d = infinity_laplacian(g);
  const double q2 = dot(g.gradient, g.gradient);
  return d * d <= g.hessian.frobenius_sq() * q2 * q2 + 1e-12;
}

bool identity_coefficient_below_one(double p) { return p * (2.0 - p) < 1.0; }

double pucci_minus(const SymMatrix& m, const EllipticityBounds& bounds) {
  const auto ev = symmetric_eigenvalues(m);
  double s = 0.0;
  for (int i = 0; i < m.dim(); ++i) s += ev[i] > 0.0 ? bounds.lambda * ev[i] : bounds.Lambda * ev[i];
  return s;
}

double pucci_plus(const SymMatrix& m, const EllipticityBounds& bounds) {
  const auto ev = symmetric_eigenvalues(m);
  double s = 0.0;
  for (int i = 0; i < m.dim(); ++i) s += ev[i] > 0.0 ? bounds.Lambda * ev[i] : bounds.lambda * ev[i];
  return s;
}

SymMatrix barrier_profile_hessian(const Point& x, int n) {
  const double r = norm(x);
  if (!(r > 1.0)) throw DomainError("barrier profile is not smooth for |x| <= 1");
  const double s = std::sqrt(r - 1.0);
  const double v1 = 0.5 / s;
  const double v2 = -0.25 / (s * (r - 1.0));
  SymMatrix h(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double xx = x[i] * x[j] / (r * r);
      h.set(i, j, v2 * xx + (v1 / r) * ((i == j ? 1.0 : 0.0) - xx));
    }
  }
  return h;
}

double barrier_margin(double r, int n, const EllipticityBounds& bounds) {
  const double s = std::sqrt(r - 1.0);
  const double radial = 0.25 / (s * (r - 1.0));  // -v''
  const double tangential = -0.5 / (s * r);      // -v'/r
  double pm = radial > 0.0 ? bounds.lambda * radial : bounds.Lambda * radial;
  pm += (n - 1) * (tangential > 0.0 ? bounds.lambda * tangential : bounds.Lambda * tangential);
  return pm - 1.0;
}

BarrierDelta barrier_find_delta(const EllipticityBounds& bounds, int n, int samples) {
  if (n < 1 || n > kMaxDim) throw ConfigError("barrier dimension must be 1, 2 or 3");
  if (samples < 1) throw ConfigError("barrier sample count must be positive");
  for (double delta = 0.5; delta >= 0x1p-30; delta *= 0.5) {
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= samples; ++j) {
      const double r = 1.0 + delta * j / (samples + 1.0);
      Point x{};
      x[0] = r;
      SymMatrix m = barrier_profile_hessian(x, n);
      SymMatrix neg(n);
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) neg.set(a, b, -m(a, b));
      worst = std::min(worst, pucci_minus(neg, bounds) - 1.0);
    }
    if (worst >= 0.0) return {delta, worst};
  }
  throw DomainError("barrier_find_delta: no dyadic delta satisfies the barrier inequality");
}

BarrierSpec::BarrierSpec(double delta, int n, EllipticityBounds bounds) : delta_(delta), n_(n), bounds_(bounds) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("barrier delta must lie in (0, 1)");
  if (n < 1 || n > kMaxDim) throw ConfigError("barrier dimension must be 1, 2 or 3");
}

double BarrierSpec::profile(const Point& x) const { return std::sqrt(std::max(norm(x) - 1.0, 0.0)); }

double BarrierSpec::psi(const Point& x, double t) const {
  return std::min(profile(x) / std::sqrt(delta_) - t, 1.0);
}

std::vector<SpaceTimePoint> barrier_sample_points(int n, std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<SpaceTimePoint> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& pt = pts[i];
    for (int a = 0; a < n; ++a) pt.x[a] = rng.uniform(-3.0, 3.0);
    pt.t = rng.uniform(-3.0, 0.0);
    if (i % 4 == 0) {
      const double r = norm(pt.x);
      const double target = rng.uniform();
      if (r > 0.0) pt.x = (target / r) * pt.x;
      pt.t = 0.0;
    }
  }
  return pts;
}

PsiReport psi_properties(const BarrierSpec& spec, std::span<const SpaceTimePoint> points) {
  PsiReport rep;
  rep.smooth_worst = std::numeric_limits<double>::infinity();
  const double inv_sqrt = 1.0 / std::sqrt(spec.delta());
  for (const auto& pt : points) {
    if (pt.t > 0.0) continue;
    const double r = norm(pt.x);
    const double psi = spec.psi(pt.x, pt.t);
    if (r <= 1.0 && pt.t == 0.0) {
      ++rep.zero_checked;
      if (psi != 0.0) ++rep.zero_failures;
    }
    if (r >= 2.0 || pt.t < -1.0) {
      ++rep.cap_checked;
      if (!(psi >= 1.0)) ++rep.cap_failures;
    }
    if (r > 1.0 && r < 1.0 + spec.delta() && psi < 1.0) {
      ++rep.smooth_checked;
      const SymMatrix h = barrier_profile_hessian(pt.x, spec.dim());
      SymMatrix neg(spec.dim());
      for (int a = 0; a < spec.dim(); ++a)
        for (int b = a; b < spec.dim(); ++b) neg.set(a, b, -h(a, b));
      const double value = -1.0 + inv_sqrt * pucci_minus(neg, spec.bounds());
      rep.smooth_worst = std::min(rep.smooth_worst, value);
      if (value < 0.0) ++rep.smooth_failures;
    }
  }
  if (rep.smooth_checked == 0) rep.smooth_worst = 0.0;
  return rep;
}

}  // namespace plap
