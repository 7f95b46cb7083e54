#include "plap/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <omp.h>

namespace plap::kernels {
namespace {

constexpr double kWeightTol = -1e-14;

struct NodeUpdate {
  double value;
  bool monotone;
};

// Difference form of the monotone stencil; exact on constants, and on linear
// data whenever the differences are exact.
template <int N>
inline NodeUpdate update_node(const double* u, std::size_t node, const std::array<std::size_t, N>& s,
                                 double inv_2h, double dt_over_h2, double p_minus_2, double eps2) {
  const double u0 = u[node];
  double q[N];
  double q2 = eps2;
  for (int a = 0; a < N; ++a) {
    q[a] = (u[node + s[a]] - u[node - s[a]]) * inv_2h;
    q2 += q[a] * q[a];
  }
  const double scale = p_minus_2 / q2;

  double slack[N];
  double lap = 0.0;
  double center = 0.0;
  for (int i = 0; i < N; ++i) {
    const double aii = 1.0 + scale * q[i] * q[i];
    slack[i] = aii;
    center += 2.0 * aii;
    lap += aii * (u[node + s[i]] - 2.0 * u0 + u[node - s[i]]);
  }
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double aij = scale * q[i] * q[j];
      const double w = std::abs(aij);
      const double diag = aij >= 0.0 ? u[node + s[i] + s[j]] + u[node - s[i] - s[j]]
                                     : u[node + s[i] - s[j]] + u[node - s[i] + s[j]];
      lap += w * (diag - u[node + s[i]] - u[node - s[i]] - u[node + s[j]] - u[node - s[j]] + 2.0 * u0);
      slack[i] -= w;
      slack[j] -= w;
      center -= 2.0 * w;
    }
  }
  bool monotone = 1.0 - dt_over_h2 * center >= kWeightTol;
  for (int i = 0; i < N; ++i) monotone = monotone && slack[i] >= kWeightTol;
  return {u0 + dt_over_h2 * lap, monotone};
}

template <int N>
StepStats step_omp_dim(const StepInputs& in, std::span<const double> current, std::span<double> next) {
  const Grid& grid = *in.grid;
  std::array<std::size_t, N> s{};
  for (int a = 0; a < N; ++a) s[a] = grid.stride(a);
  const double inv_2h = 1.0 / (2.0 * grid.h());
  const double dt_over_h2 = in.dt / (grid.h() * grid.h());
  const double p_minus_2 = in.params.p - 2.0;
  const double eps2 = in.params.eps * in.params.eps;
  const double* u = current.data();
  double* out = next.data();
  const std::size_t* nodes = in.nodes.data();
  const long count = static_cast<long>(in.nodes.size());

  std::size_t non_monotone = 0;
  std::size_t first_bad = kNoNode;
  std::size_t first_nan = kNoNode;
#pragma omp parallel for schedule(static) reduction(+ : non_monotone) reduction(min : first_bad, first_nan)
  for (long k = 0; k < count; ++k) {
    const std::size_t node = nodes[k];
    const auto r = update_node<N>(u, node, s, inv_2h, dt_over_h2, p_minus_2, eps2);
    out[node] = r.value;
    if (!r.monotone) {
      ++non_monotone;
      first_bad = std::min(first_bad, node);
    }
    if (!std::isfinite(r.value)) first_nan = std::min(first_nan, node);
  }
  return {in.nodes.size(), non_monotone, first_bad, first_nan};
}

}  // namespace

StepStats step_omp(const StepInputs& in, std::span<const double> current, std::span<double> next) {
  switch (in.grid->dim()) {
    case 1:
      return step_omp_dim<1>(in, current, next);
    case 2:
      return step_omp_dim<2>(in, current, next);
    default:
      return step_omp_dim<3>(in, current, next);
  }
}

// Weight form: assemble the explicit stencil weights per node and take the
// weighted sum. Independent of the difference form above.
StepStats step_serial(const StepInputs& in, std::span<const double> current, std::span<double> next) {
  const Grid& grid = *in.grid;
  const int n = grid.dim();
  const double h = grid.h();
  const double c = in.dt / (h * h);
  StepStats stats;
  stats.updated = in.nodes.size();
  for (const std::size_t node : in.nodes) {
    Point q{};
    for (int a = 0; a < n; ++a) {
      const std::size_t sa = grid.stride(a);
      q[a] = (current[node + sa] - current[node - sa]) / (2.0 * h);
    }
    const SymMatrix a = coeff_matrix(q, in.params);

    std::map<long, double> weights;
    weights[0] = 1.0;
    for (int i = 0; i < n; ++i) {
      const long si = static_cast<long>(grid.stride(i));
      weights[si] += c * a(i, i);
      weights[-si] += c * a(i, i);
      weights[0] -= 2.0 * c * a(i, i);
      for (int j = i + 1; j < n; ++j) {
        const long sj = static_cast<long>(grid.stride(j));
        const double w = c * std::abs(a(i, j));
        const long diag = a(i, j) >= 0.0 ? si + sj : si - sj;
        weights[diag] += w;
        weights[-diag] += w;
        weights[si] -= w;
        weights[-si] -= w;
        weights[sj] -= w;
        weights[-sj] -= w;
        weights[0] += 2.0 * w;
      }
    }
    double value = 0.0;
    bool monotone = true;
    for (const auto& [offset, w] : weights) {
      value += w * current[static_cast<std::size_t>(static_cast<long>(node) + offset)];
      monotone = monotone && w >= kWeightTol;
    }
    next[node] = value;
    if (!monotone) {
      ++stats.non_monotone;
      stats.first_non_monotone = std::min(stats.first_non_monotone, node);
    }
    if (!std::isfinite(value)) stats.first_non_finite = std::min(stats.first_non_finite, node);
  }
  return stats;
}

Extrema extrema_omp(std::span<const double> values, std::size_t level_stride, int first_level,
                    int last_level, std::span<const std::size_t> nodes) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const std::size_t* idx = nodes.data();
  const long count = static_cast<long>(nodes.size());
#pragma omp parallel for collapse(2) schedule(static) reduction(min : lo) reduction(max : hi)
  for (int m = first_level; m <= last_level; ++m) {
    for (long k = 0; k < count; ++k) {
      const double v = values[static_cast<std::size_t>(m) * level_stride + idx[k]];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const std::size_t levels = last_level >= first_level ? static_cast<std::size_t>(last_level - first_level + 1) : 0;
  return {lo, hi, levels * nodes.size()};
}

Extrema extrema_serial(std::span<const double> values, std::size_t level_stride, int first_level,
                       int last_level, std::span<const std::size_t> nodes) {
  Extrema e;
  for (int m = first_level; m <= last_level; ++m) {
    for (const std::size_t node : nodes) {
      const double v = values[static_cast<std::size_t>(m) * level_stride + node];
      e.min = std::min(e.min, v);
      e.max = std::max(e.max, v);
      ++e.count;
    }
  }
  return e;
}

}  // namespace plap::kernels
