#pragma once

#include <memory>
#include <string>
#include <vector>

#include "plap/calculus.hpp"
#include "plap/types.hpp"

namespace plap {

/// Closed-form spatial field with exact derivatives through third order.
class AnalyticField {
 public:
  virtual ~AnalyticField() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual double value(const Point& x) const = 0;
  virtual Point gradient(const Point& x) const = 0;
  virtual SymMatrix hessian(const Point& x) const = 0;
  virtual Tensor3 third(const Point& x) const = 0;

  GradHess grad_hess(const Point& x) const { return {gradient(x), hessian(x), std::nullopt}; }
};

using AnalyticFieldPtr = std::shared_ptr<const AnalyticField>;

// e . x + a
AnalyticFieldPtr make_linear_field(int n, const Point& e, double a = 0.0);
// 0.5 x^T M x + b . x + c
AnalyticFieldPtr make_quadratic_field(const SymMatrix& m, const Point& b = {}, double c = 0.0);
// amp * prod_i sin(k_i x_i + phase_i)
AnalyticFieldPtr make_trig_product_field(int n, double amp, const Point& k, const Point& phase);
// amp * exp(-|x - c|^2 / (2 sigma^2))
AnalyticFieldPtr make_gaussian_field(int n, double amp, const Point& center, double sigma);
// amp * exp(k . x)
AnalyticFieldPtr make_exp_linear_field(int n, double amp, const Point& k);
// amp * (k . x + b)^3
AnalyticFieldPtr make_cubic_ridge_field(int n, double amp, const Point& k, double b);
AnalyticFieldPtr make_sum_field(AnalyticFieldPtr a, AnalyticFieldPtr b);

/// Fixed, deterministic collection of at least 20 fields in dimension n.
std::vector<AnalyticFieldPtr> analytic_library(int n);

}  // namespace plap
