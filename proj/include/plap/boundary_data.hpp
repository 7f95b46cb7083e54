#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "plap/types.hpp"

namespace plap {

/// Values of boundary data at a fixed point set, for many times.
class BoundarySampler {
 public:
  virtual ~BoundarySampler() = default;
  virtual void fill(double t, std::span<double> out) const = 0;
};

/// Dirichlet data g(x, t), defined on the whole grid box; the solver reads it
/// on every node that is not updated by the scheme.
class BoundaryData {
 public:
  virtual ~BoundaryData() = default;
  virtual double value(const Point& x, double t) const = 0;
  virtual std::unique_ptr<BoundarySampler> sampler(std::vector<Point> points) const;
};

using BoundaryPtr = std::shared_ptr<const BoundaryData>;

BoundaryPtr make_function_boundary(std::function<double(const Point&, double)> f);

/// weight_a * a + weight_b * b + constant.
BoundaryPtr make_combined_boundary(BoundaryPtr a, double weight_a, BoundaryPtr b, double weight_b,
                                   double constant);

/// One term amp * cos(pi/2 * (k . x + omega * t) + phase).
struct TrigTerm {
  std::array<long, kMaxDim> k{};
  long omega = 0;
  double amp = 0.0;
  double phase = 0.0;
};

class TrigBoundary final : public BoundaryData {
 public:
  TrigBoundary(int n, std::vector<TrigTerm> terms, double scale);

  double value(const Point& x, double t) const override;
  std::unique_ptr<BoundarySampler> sampler(std::vector<Point> points) const override;

  // Sum of the terms before scaling.
  double raw_value(const Point& x, double t) const;

  int dim() const { return n_; }
  double scale() const { return scale_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }

 private:
  int n_;
  std::vector<TrigTerm> terms_;
  double scale_;
};

/// Reference lattice used to sup-normalize generated data: the box [-1, 1]^n
/// and the interval [-1, 0], both at spacing 1/16.
std::vector<std::pair<Point, double>> normalization_lattice(int n);

/// Deterministic random low-order trigonometric polynomial in (x, t),
/// normalized so that its maximum absolute value over the reference lattice
/// is 1. `smoothness` is the maximum integer frequency m >= 1; the series has
/// 2m + 2 terms drawn from SplitMix64(seed) in the order
///   k_0 .. k_{n-1} in [-m, m], omega in [0, m], u_amp, u_phase
/// with amp = (2 u_amp - 1) / (1 + |k|^2 + omega^2) and phase = 2 pi u_phase.
std::shared_ptr<const TrigBoundary> generate_boundary_data(std::uint64_t seed, int smoothness, int n);

}  // namespace plap
