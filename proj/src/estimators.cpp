#include "plap/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plap/error.hpp"
#include "plap/fit.hpp"
#include "plap/kernels.hpp"
#include "plap/solver.hpp"

namespace plap {
namespace {

struct Stencil {
  std::array<std::size_t, kMaxDim> stride{};
  double inv_2h = 0.0;
  int n = 1;

  explicit Stencil(const Grid& grid) : inv_2h(1.0 / (2.0 * grid.h())), n(grid.dim()) {
    for (int a = 0; a < n; ++a) stride[a] = grid.stride(a);
  }

  Point gradient(const double* u, std::size_t node) const {
    Point g{};
    for (int a = 0; a < n; ++a) g[a] = (u[node + stride[a]] - u[node - stride[a]]) * inv_2h;
    return g;
  }
};

std::vector<bool> core_mask(const Grid& grid, const ParabolicCylinder& cyl) {
  std::vector<bool> mask(grid.node_count(), false);
  for (const std::size_t node : cylinder_nodes(grid, cyl).core) mask[node] = true;
  return mask;
}

bool stencil_inside(const Grid& grid, const std::vector<bool>& mask, std::size_t node) {
  const auto idx = grid.unravel(node);
  const int n = grid.dim();
  int total = 1;
  for (int a = 0; a < n; ++a) total *= 3;
  for (int code = 0; code < total; ++code) {
    auto nb = idx;
    int rest = code;
    for (int a = 0; a < n; ++a) {
      nb[a] += rest % 3 - 1;
      rest /= 3;
    }
    if (!mask[grid.ravel(nb)]) return false;
  }
  return true;
}

// Max and min of each gradient component plus sup |grad u| over a sample.
struct GradientExtrema {
  Point min{};
  Point max{};
  double sup_norm = 0.0;
};

GradientExtrema gradient_extrema(const SpaceTimeField& field, const GradientSample& sample) {
  const Grid& grid = field.grid();
  const Stencil st(grid);
  const double inf = std::numeric_limits<double>::infinity();
  double lo0 = inf, lo1 = inf, lo2 = inf, hi0 = -inf, hi1 = -inf, hi2 = -inf, sup = 0.0;
  const auto values = field.values();
  const std::size_t stride = grid.node_count();
  const std::size_t* nodes = sample.nodes.data();
  const long count = static_cast<long>(sample.nodes.size());
#pragma omp parallel for collapse(2) schedule(static) \
    reduction(min : lo0, lo1, lo2) reduction(max : hi0, hi1, hi2, sup)
  for (int m = sample.first_level; m <= sample.last_level; ++m) {
    for (long k = 0; k < count; ++k) {
      const Point g = st.gradient(values.data() + static_cast<std::size_t>(m) * stride, nodes[k]);
      lo0 = std::min(lo0, g[0]);
      lo1 = std::min(lo1, g[1]);
      lo2 = std::min(lo2, g[2]);
      hi0 = std::max(hi0, g[0]);
      hi1 = std::max(hi1, g[1]);
      hi2 = std::max(hi2, g[2]);
      sup = std::max(sup, norm(g));
    }
  }
  return {{lo0, lo1, lo2}, {hi0, hi1, hi2}, sup};
}

// Number of sample points whose gradient satisfies `pred`.
template <typename Pred>
std::size_t count_gradients(const SpaceTimeField& field, const GradientSample& sample, Pred pred) {
  const Grid& grid = field.grid();
  const Stencil st(grid);
  const auto values = field.values();
  const std::size_t stride = grid.node_count();
  const std::size_t* nodes = sample.nodes.data();
  const long count = static_cast<long>(sample.nodes.size());
  std::size_t hits = 0;
#pragma omp parallel for collapse(2) schedule(static) reduction(+ : hits)
  for (int m = sample.first_level; m <= sample.last_level; ++m) {
    for (long k = 0; k < count; ++k) {
      if (pred(st.gradient(values.data() + static_cast<std::size_t>(m) * stride, nodes[k]))) ++hits;
    }
  }
  return hits;
}

double max_relative_deviation(std::span<const double> x, std::span<const double> y, double slope, double c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(c * std::pow(x[i], slope) / y[i] - 1.0));
  return worst;
}

}  // namespace

GradientSample gradient_sample(const SpaceTimeField& field, const ParabolicCylinder& cyl) {
  const Grid& grid = field.grid();
  const CylinderNodes cn = cylinder_nodes(grid, cyl);
  GradientSample out;
  out.first_level = cn.bottom_level;
  out.last_level = cn.top_level;
  if (cn.empty()) return out;

  std::vector<bool> mask;
  if (field.domain()) {
    mask = core_mask(grid, *field.domain());
    const CylinderNodes dom = cylinder_nodes(grid, *field.domain());
    if (dom.has_bottom) out.first_level = std::max(out.first_level, dom.bottom_level + 1);
  }
  for (const std::size_t node : cn.ball) {
    if (!grid.off_faces(node)) continue;
    if (!mask.empty() && !stencil_inside(grid, mask, node)) continue;
    out.nodes.push_back(node);
  }
  return out;
}

double oscillation(const SpaceTimeField& field, const ParabolicCylinder& cyl) {
  const CylinderNodes cn = cylinder_nodes(field.grid(), cyl);
  if (cn.empty()) throw DomainError("empty cylinder");
  const auto e = kernels::extrema_omp(field.values(), field.grid().node_count(), cn.bottom_level,
                                      cn.top_level, cn.ball);
  return e.max - e.min;
}

ParabolicCylinder reference_cylinder(const SpaceTimeField& field) {
  return field.domain() ? *field.domain() : spanning_cylinder(field.grid());
}

double sup_gradient(const SpaceTimeField& field, const ParabolicCylinder& cyl) {
  const auto sample = gradient_sample(field, cyl);
  if (sample.count() == 0) throw DomainError("no gradient-eligible nodes in cylinder");
  return gradient_extrema(field, sample).sup_norm;
}

std::pair<SpaceTimeField, double> normalize_gradient(const SpaceTimeField& field) {
  const double sup = sup_gradient(field, reference_cylinder(field));
  if (!(sup > 0.0)) throw DomainError("cannot normalize a field with vanishing gradient");
  SpaceTimeField out = field;
  const double scale = 1.0 / sup;
  for (double& v : out.values()) v *= scale;
  return {std::move(out), scale};
}

double interpolate(const SpaceTimeField& field, const Point& x, double t) {
  const Grid& grid = field.grid();
  const int n = grid.dim();
  const int last = grid.nodes_per_axis() - 1;
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> w{};
  for (int a = 0; a < n; ++a) {
    const double f = (x[a] + grid.half_width()) / grid.h();
    int i = static_cast<int>(std::floor(f + 1e-12));
    i = std::clamp(i, 0, last - 1);
    base[a] = i;
    w[a] = std::clamp(f - i, 0.0, 1.0);
  }
  const double ft = (t - grid.t_begin()) / grid.dt();
  int m = std::clamp(static_cast<int>(std::floor(ft + 1e-12)), 0, std::max(0, grid.levels() - 2));
  const double wt = grid.levels() > 1 ? std::clamp(ft - m, 0.0, 1.0) : 0.0;

  auto spatial = [&](int level) {
    double acc = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      auto idx = base;
      double weight = 1.0;
      for (int a = 0; a < n; ++a) {
        const bool up = (corner >> a) & 1;
        idx[a] += up ? 1 : 0;
        weight *= up ? w[a] : 1.0 - w[a];
      }
      if (weight != 0.0) acc += weight * field.at(grid.ravel(idx), level);
    }
    return acc;
  };
  const double lo = spatial(m);
  if (wt == 0.0) return lo;
  return lo + wt * (spatial(m + 1) - lo);
}

LipschitzResult lipschitz_ratio(const SpaceTimeField& field, const PLaplaceParams& params) {
  const ParabolicCylinder q1 = reference_cylinder(field);
  const ParabolicCylinder half{q1.center, q1.t_top, 0.5 * q1.radius};
  const CylinderNodes cn = cylinder_nodes(field.grid(), q1);
  if (cn.empty()) throw DomainError("empty cylinder");
  const auto e = kernels::extrema_omp(field.values(), field.grid().node_count(), cn.bottom_level,
                                      cn.top_level, cn.ball);
  LipschitzResult r;
  r.sup_abs = std::max(std::abs(e.min), std::abs(e.max));
  r.sup_gradient = sup_gradient(field, half);
  const double denom = r.sup_abs + params.eps;
  if (!(denom > 0.0)) throw DomainError("lipschitz_ratio: zero field with eps = 0");
  r.ratio = r.sup_gradient / denom;
  return r;
}

HolderFit holder_fit_space(const SpaceTimeField& field, const Point& center, double t_top,
                           std::span<const double> radii) {
  if (radii.size() < 3) throw DomainError("holder_fit_space needs at least 3 radii");
  HolderFit fit;
  for (const double r : radii) {
    const auto sample = gradient_sample(field, {center, t_top, r});
    if (sample.count() == 0) throw DomainError("holder_fit_space: radius not resolved on the grid");
    const auto ext = gradient_extrema(field, sample);
    double osc = 0.0;
    for (int a = 0; a < field.grid().dim(); ++a) osc = std::max(osc, ext.max[a] - ext.min[a]);
    if (osc <= 1e-12 * std::max(1.0, ext.sup_norm)) continue;
    fit.radii.push_back(r);
    fit.oscillations.push_back(osc);
  }
  if (fit.radii.size() < 3) throw DomainError("field locally constant");
  std::vector<double> lr, lo;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    lr.push_back(std::log(fit.radii[i]));
    lo.push_back(std::log(fit.oscillations[i]));
  }
  const auto line = least_squares_line(lr, lo);
  fit.alpha = line.slope;
  fit.C = std::exp(line.intercept);
  fit.residual = max_relative_deviation(fit.radii, fit.oscillations, fit.alpha, fit.C);
  return fit;
}

TimeFit holder_fit_time(const SpaceTimeField& field, const Point& x, std::span<const double> lags) {
  if (lags.size() < 3) throw DomainError("holder_fit_time needs at least 3 lags");
  const Grid& grid = field.grid();
  std::array<int, kMaxDim> idx{};
  for (int a = 0; a < grid.dim(); ++a)
    idx[a] = std::clamp(static_cast<int>(std::lround((x[a] + grid.half_width()) / grid.h())), 0,
                        grid.nodes_per_axis() - 1);
  const std::size_t node = grid.ravel(idx);
  const int top = grid.levels() - 1;
  const double u_top = field.at(node, top);

  TimeFit fit;
  for (const double lag : lags) {
    const double steps = lag / grid.dt();
    const long s = std::lround(steps);
    if (std::abs(steps - static_cast<double>(s)) > 1e-9 || s < 1 || s > top)
      throw DomainError("holder_fit_time: lag is not a resolvable multiple of dt");
    const double inc = std::abs(u_top - field.at(node, top - static_cast<int>(s)));
    if (inc <= 1e-14 * std::max(1.0, std::abs(u_top))) continue;
    fit.lags.push_back(lag);
    fit.increments.push_back(inc);
  }
  if (fit.lags.size() < 3) throw DomainError("field locally constant in time");
  std::vector<double> ll, li;
  for (std::size_t i = 0; i < fit.lags.size(); ++i) {
    ll.push_back(std::log(fit.lags[i]));
    li.push_back(std::log(fit.increments[i]));
  }
  const auto line = least_squares_line(ll, li);
  fit.exponent = line.slope;
  fit.exponent_sqrt_scale = 2.0 * line.slope;
  fit.C = std::exp(line.intercept);
  fit.residual = max_relative_deviation(fit.lags, fit.increments, fit.exponent, fit.C);
  return fit;
}

OscCascadeParams::OscCascadeParams(double ell, double mu, double tau, double delta, double c0, double c1)
    : ell_(ell), mu_(mu), tau_(tau), delta_(delta), c0_(c0), c1_(c1) {
  if (!(ell > 0.0 && ell < 1.0)) throw ConfigError("cascade ell must lie in (0, 1)");
  if (!(mu > 0.0)) throw ConfigError("cascade mu must be positive");
  if (!(tau > 0.0 && tau < 0.25)) throw ConfigError("cascade tau must lie in (0, 1/4)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("cascade delta must lie in (0, 1)");
  if (!(c0 > 0.0) || !(c1 > 0.0)) throw ConfigError("cascade constants c0, c1 must be positive");
}

double wbar_transform(double w, const OscCascadeParams& c) {
  const double nu = c.nu();
  return -std::expm1(nu * (w - c.W())) / nu;
}

CascadeResult oscillation_cascade(const SpaceTimeField& field, const Point& e, const OscCascadeParams& c, int K) {
  const ParabolicCylinder q1 = reference_cylinder(field);
  if (sup_gradient(field, q1) > 1.0 + 1e-12)
    throw DomainError("oscillation_cascade: sup |grad u| must not exceed 1 on the reference cylinder");
  CascadeResult out;
  double radius = q1.radius;
  for (int i = 0; i <= K; ++i) {
    const ParabolicCylinder cyl{q1.center, q1.t_top, radius};
    const ParabolicCylinder next{q1.center, q1.t_top, radius * c.tau()};
    const auto sample = gradient_sample(field, cyl);
    const auto sample_next = gradient_sample(field, next);
    if (sample.count() < 27 || sample_next.count() == 0) {
      out.truncated = true;
      break;
    }
    CascadeRecord rec;
    rec.level = i;
    rec.radius = radius;
    rec.threshold = c.ell() * std::pow(1.0 - c.delta(), i);
    const double thr = rec.threshold;
    const std::size_t hits = count_gradients(field, sample, [&](const Point& g) { return dot(g, e) <= thr; });
    rec.fraction = static_cast<double>(hits) / static_cast<double>(sample.count());
    rec.condition_held = rec.fraction > c.mu();
    rec.sup_next = gradient_extrema(field, sample_next).sup_norm;
    rec.predicted = std::pow(1.0 - c.delta(), i + 1);
    if (!rec.condition_held && !out.first_failure) out.first_failure = i;
    out.records.push_back(rec);
    radius *= c.tau();
  }
  return out;
}

RescaledField rescale_cylinder(const SpaceTimeField& field, int k, const OscCascadeParams& c, double eps) {
  if (k < 0) throw DomainError("rescale level must be non-negative");
  const Grid& grid = field.grid();
  const ParabolicCylinder q1 = reference_cylinder(field);
  const double s = std::pow(c.tau(), k);
  const double shrink = std::pow(1.0 - c.delta(), k);
  RescaledField out{field, eps / shrink, eps * eps / (shrink * shrink)};
  if (k == 0) return out;
  if (s * q1.radius < grid.h() || s * s * q1.radius * q1.radius < grid.dt())
    throw DomainError("rescale_cylinder: Q_{tau^k} is not resolvable on the grid");

  const double factor = 1.0 / (s * shrink);
  for (int m = 0; m < grid.levels(); ++m) {
    const double t = q1.t_top + s * s * (grid.time(m) - q1.t_top);
    auto dst = out.field.level(m);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      const Point x = q1.center + s * (grid.point(node) - q1.center);
      dst[node] = factor * interpolate(field, x, t);
    }
  }
  return out;
}

SliceBound slice_osc_transfer(const SpaceTimeField& field, const ParabolicCylinder& cyl,
                              const PLaplaceParams& params) {
  const CylinderNodes cn = cylinder_nodes(field.grid(), cyl);
  if (cn.empty()) throw DomainError("empty cylinder");
  const std::size_t stride = field.grid().node_count();
  SliceBound b;
  for (int m = cn.bottom_level; m <= cn.top_level; ++m) {
    const auto e = kernels::extrema_omp(field.values(), stride, m, m, cn.ball);
    b.A = std::max(b.A, e.max - e.min);
  }
  const auto all = kernels::extrema_omp(field.values(), stride, cn.bottom_level, cn.top_level, cn.ball);
  b.full = all.max - all.min;
  b.transfer_constant = 10.0 * field.grid().dim() * ellipticity_bounds(params).Lambda + 5.0;
  b.applicable = b.A > 0.0;
  b.pass = b.applicable && b.full <= b.transfer_constant * b.A + 1e-12;
  return b;
}

SmallnessResult gradient_smallness(const SpaceTimeField& field, const SmallnessParams& s,
                                   const ParabolicCylinder& cyl) {
  const Grid& grid = field.grid();
  const auto sample = gradient_sample(field, cyl);
  if (sample.count() == 0) throw DomainError("gradient_smallness: no gradient-eligible nodes");
  SmallnessResult r;
  const double eps0 = s.eps0;
  const std::size_t far = count_gradients(field, sample, [&](const Point& g) { return norm(g - s.e) > eps0; });
  r.fraction = static_cast<double>(far) / static_cast<double>(sample.count());

  const ParabolicCylinder half{cyl.center, cyl.t_top, 0.5 * cyl.radius};
  const CylinderNodes cn = cylinder_nodes(grid, half);
  if (cn.empty()) throw DomainError("empty cylinder");
  std::vector<double> offsets;
  offsets.reserve(cn.ball.size() * static_cast<std::size_t>(cn.top_level - cn.bottom_level + 1));
  std::vector<double> tilt(cn.ball.size());
  for (std::size_t i = 0; i < cn.ball.size(); ++i) tilt[i] = dot(s.e, grid.point(cn.ball[i]) - cyl.center);
  for (int m = cn.bottom_level; m <= cn.top_level; ++m)
    for (std::size_t i = 0; i < cn.ball.size(); ++i) offsets.push_back(field.at(cn.ball[i], m) - tilt[i]);

  std::vector<double> sorted = offsets;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(mid), sorted.end());
  r.best_a = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<long>(mid));
    r.best_a = 0.5 * (lower + r.best_a);
  }
  for (const double v : offsets) r.deviation = std::max(r.deviation, std::abs(v - r.best_a));
  r.hypothesis = r.fraction <= s.eps1;
  r.implication = !r.hypothesis || r.deviation <= s.eta;
  return r;
}

DichotomyResult cascade_dichotomy(const SpaceTimeField& field, std::span<const Point> directions,
                                  const OscCascadeParams& c, int K, double eps,
                                  std::span<const SmallnessParams> sweep) {
  DichotomyResult out;
  if (directions.empty()) return out;
  int measured = std::numeric_limits<int>::max();
  std::vector<CascadeResult> runs;
  for (const Point& dir : directions) {
    const double len = norm(dir);
    if (!(len > 0.0)) throw DomainError("cascade direction must be non-zero");
    runs.push_back(oscillation_cascade(field, (1.0 / len) * dir, c, K));
    measured = std::min(measured, static_cast<int>(runs.back().records.size()));
  }
  out.levels_measured = measured;
  for (std::size_t d = 0; d < runs.size(); ++d) {
    const auto& f = runs[d].first_failure;
    if (f && *f < measured && (out.stop_level < 0 || *f < out.stop_level)) {
      out.stop_level = *f;
      out.stop_direction = (1.0 / norm(directions[d])) * directions[d];
    }
  }
  for (const auto& run : runs)
    for (int i = 1; i < measured; ++i)
      out.nesting_monotone = out.nesting_monotone && run.records[i].sup_next <= run.records[i - 1].sup_next;

  out.cascades = runs;
  if (out.stop_level >= 0) {
    RescaledField v;
    try {
      v = rescale_cylinder(field, out.stop_level, c, eps);
    } catch (const DomainError&) {
      return out;  // unresolved
    }
    const ParabolicCylinder q1 = reference_cylinder(v.field);
    for (SmallnessParams s : sweep) {
      s.e = out.stop_direction;
      out.smallness.push_back(gradient_smallness(v.field, s, q1));
      out.implication_all = out.implication_all && out.smallness.back().implication;
    }
    out.effective_eps = v.effective_eps;
    out.effective_eps_squared = v.effective_eps_squared;
    out.branch = DichotomyBranch::kStopped;
  } else if (measured > 0) {
    out.branch = DichotomyBranch::kNested;
  }
  return out;
}

}  // namespace plap
