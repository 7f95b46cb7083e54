#include "plap/analytic.hpp"

#include <cmath>
#include <sstream>

namespace plap {
namespace {

Point truncate(int n, Point v) {
  for (int a = n; a < kMaxDim; ++a) v[a] = 0.0;
  return v;
}

class LinearField final : public AnalyticField {
 public:
  LinearField(int n, const Point& e, double a) : n_(n), e_(truncate(n, e)), a_(a) {}
  std::string name() const override { return "linear"; }
  int dim() const override { return n_; }
  double value(const Point& x) const override { return dot(e_, x) + a_; }
  Point gradient(const Point&) const override { return e_; }
  SymMatrix hessian(const Point&) const override { return SymMatrix(n_); }
  Tensor3 third(const Point&) const override { return {}; }

 private:
  int n_;
  Point e_;
  double a_;
};

class QuadraticField final : public AnalyticField {
 public:
  QuadraticField(const SymMatrix& m, const Point& b, double c)
      : m_(m), b_(truncate(m.dim(), b)), c_(c) {}
  std::string name() const override { return "quadratic"; }
  int dim() const override { return m_.dim(); }
  double value(const Point& x) const override { return 0.5 * dot(x, m_.apply(x)) + dot(b_, x) + c_; }
  Point gradient(const Point& x) const override { return m_.apply(x) + b_; }
  SymMatrix hessian(const Point&) const override { return m_; }
  Tensor3 third(const Point&) const override { return {}; }

 private:
  SymMatrix m_;
  Point b_;
  double c_;
};

// Derivatives of a product of per-axis factors: each partial derivative is a
// product of the per-axis derivatives of the right orders.
class TrigProductField final : public AnalyticField {
 public:
  TrigProductField(int n, double amp, const Point& k, const Point& phase)
      : n_(n), amp_(amp), k_(k), phase_(phase) {}
  std::string name() const override { return "trig_product"; }
  int dim() const override { return n_; }

  double value(const Point& x) const override { return partial(x, {0, 0, 0}); }

  Point gradient(const Point& x) const override {
    Point g{};
    for (int i = 0; i < n_; ++i) g[i] = partial(x, unit(i));
    return g;
  }

  SymMatrix hessian(const Point& x) const override {
    SymMatrix h(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        auto orders = unit(i);
        ++orders[j];
        h.set(i, j, partial(x, orders));
      }
    return h;
  }

  Tensor3 third(const Point& x) const override {
    Tensor3 t;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          auto orders = unit(i);
          ++orders[j];
          ++orders[k];
          t(i, j, k) = partial(x, orders);
        }
    t.symmetrize(n_);
    return t;
  }

 private:
  static std::array<int, kMaxDim> unit(int i) {
    std::array<int, kMaxDim> o{};
    o[i] = 1;
    return o;
  }

  double partial(const Point& x, const std::array<int, kMaxDim>& orders) const {
    double prod = amp_;
    for (int a = 0; a < n_; ++a) {
      const double theta = k_[a] * x[a] + phase_[a];
      const int m = orders[a];
      // d^m/dx^m sin(k x + phi) = k^m sin(k x + phi + m pi/2)
      const double base = (m % 2 == 0) ? std::sin(theta) : std::cos(theta);
      const double sign = (m % 4 == 2 || m % 4 == 3) ? -1.0 : 1.0;
      prod *= sign * std::pow(k_[a], m) * base;
    }
    return prod;
  }

  int n_;
  double amp_;
  Point k_;
  Point phase_;
};

class GaussianField final : public AnalyticField {
 public:
  GaussianField(int n, double amp, const Point& center, double sigma)
      : n_(n), amp_(amp), c_(truncate(n, center)), s_(sigma * sigma) {}
  std::string name() const override { return "gaussian"; }
  int dim() const override { return n_; }

  double value(const Point& x) const override {
    const Point y = truncate(n_, x) - c_;
    return amp_ * std::exp(-dot(y, y) / (2.0 * s_));
  }

  Point gradient(const Point& x) const override {
    const Point y = truncate(n_, x) - c_;
    return (-value(x) / s_) * y;
  }

  SymMatrix hessian(const Point& x) const override {
    const Point y = truncate(n_, x) - c_;
    const double g = value(x);
    SymMatrix h(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        h.set(i, j, g * (y[i] * y[j] / (s_ * s_) - (i == j ? 1.0 / s_ : 0.0)));
    return h;
  }

  Tensor3 third(const Point& x) const override {
    const Point y = truncate(n_, x) - c_;
    const double g = value(x);
    Tensor3 t;
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          t(i, j, k) = g * (-y[i] * y[j] * y[k] / (s_ * s_ * s_) +
                            (delta(i, j) * y[k] + delta(i, k) * y[j] + delta(j, k) * y[i]) / (s_ * s_));
    t.symmetrize(n_);
    return t;
  }

 private:
  int n_;
  double amp_;
  Point c_;
  double s_;
};

class ExpLinearField final : public AnalyticField {
 public:
  ExpLinearField(int n, double amp, const Point& k) : n_(n), amp_(amp), k_(truncate(n, k)) {}
  std::string name() const override { return "exp_linear"; }
  int dim() const override { return n_; }
  double value(const Point& x) const override { return amp_ * std::exp(dot(k_, x)); }
  Point gradient(const Point& x) const override { return value(x) * k_; }
  SymMatrix hessian(const Point& x) const override {
    const double v = value(x);
    SymMatrix h(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) h.set(i, j, v * k_[i] * k_[j]);
    return h;
  }
  Tensor3 third(const Point& x) const override {
    const double v = value(x);
    Tensor3 t;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) t(i, j, k) = v * k_[i] * k_[j] * k_[k];
    t.symmetrize(n_);
    return t;
  }

 private:
  int n_;
  double amp_;
  Point k_;
};

class CubicRidgeField final : public AnalyticField {
 public:
  CubicRidgeField(int n, double amp, const Point& k, double b)
      : n_(n), amp_(amp), k_(truncate(n, k)), b_(b) {}
  std::string name() const override { return "cubic_ridge"; }
  int dim() const override { return n_; }
  double value(const Point& x) const override {
    const double s = dot(k_, x) + b_;
    return amp_ * s * s * s;
  }
  Point gradient(const Point& x) const override {
    const double s = dot(k_, x) + b_;
    return (3.0 * amp_ * s * s) * k_;
  }
  SymMatrix hessian(const Point& x) const override {
    const double s = dot(k_, x) + b_;
    SymMatrix h(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) h.set(i, j, 6.0 * amp_ * s * k_[i] * k_[j]);
    return h;
  }
  Tensor3 third(const Point&) const override {
    Tensor3 t;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) t(i, j, k) = 6.0 * amp_ * k_[i] * k_[j] * k_[k];
    t.symmetrize(n_);
    return t;
  }

 private:
  int n_;
  double amp_;
  Point k_;
  double b_;
};

class SumField final : public AnalyticField {
 public:
  SumField(AnalyticFieldPtr a, AnalyticFieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  std::string name() const override { return a_->name() + "+" + b_->name(); }
  int dim() const override { return a_->dim(); }
  double value(const Point& x) const override { return a_->value(x) + b_->value(x); }
  Point gradient(const Point& x) const override { return a_->gradient(x) + b_->gradient(x); }
  SymMatrix hessian(const Point& x) const override {
    const SymMatrix ha = a_->hessian(x);
    const SymMatrix hb = b_->hessian(x);
    SymMatrix h(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) h.set(i, j, ha(i, j) + hb(i, j));
    return h;
  }
  Tensor3 third(const Point& x) const override {
    const Tensor3 ta = a_->third(x);
    const Tensor3 tb = b_->third(x);
    Tensor3 t;
    for (int i = 0; i < kMaxDim; ++i)
      for (int j = 0; j < kMaxDim; ++j)
        for (int k = 0; k < kMaxDim; ++k) t(i, j, k) = ta(i, j, k) + tb(i, j, k);
    t.symmetrize(dim());
    return t;
  }

 private:
  AnalyticFieldPtr a_;
  AnalyticFieldPtr b_;
};

}  // namespace

AnalyticFieldPtr make_linear_field(int n, const Point& e, double a) {
  return std::make_shared<LinearField>(n, e, a);
}
AnalyticFieldPtr make_quadratic_field(const SymMatrix& m, const Point& b, double c) {
  return std::make_shared<QuadraticField>(m, b, c);
}
AnalyticFieldPtr make_trig_product_field(int n, double amp, const Point& k, const Point& phase) {
  return std::make_shared<TrigProductField>(n, amp, k, phase);
}
AnalyticFieldPtr make_gaussian_field(int n, double amp, const Point& center, double sigma) {
  return std::make_shared<GaussianField>(n, amp, center, sigma);
}
AnalyticFieldPtr make_exp_linear_field(int n, double amp, const Point& k) {
  return std::make_shared<ExpLinearField>(n, amp, k);
}
AnalyticFieldPtr make_cubic_ridge_field(int n, double amp, const Point& k, double b) {
  return std::make_shared<CubicRidgeField>(n, amp, k, b);
}
AnalyticFieldPtr make_sum_field(AnalyticFieldPtr a, AnalyticFieldPtr b) {
  return std::make_shared<SumField>(std::move(a), std::move(b));
}

std::vector<AnalyticFieldPtr> analytic_library(int n) {
  SymMatrix twice_identity = SymMatrix::identity(n);
  for (int i = 0; i < n; ++i) twice_identity.set(i, i, 2.0);

  SymMatrix skew(n);
  skew.set(0, 0, 1.5);
  if (n > 1) {
    skew.set(0, 1, -0.7);
    skew.set(1, 1, -0.4);
  }
  if (n > 2) {
    skew.set(0, 2, 0.3);
    skew.set(1, 2, 0.9);
    skew.set(2, 2, 0.8);
  }

  SymMatrix saddle(n);
  saddle.set(0, 0, 2.0);
  if (n > 1) saddle.set(1, 1, -2.0);

  std::vector<AnalyticFieldPtr> lib;
  lib.push_back(make_linear_field(n, {0.6, 0.8, 0.0}, 0.3));
  lib.push_back(make_quadratic_field(twice_identity));
  lib.push_back(make_quadratic_field(skew, {0.2, -0.5, 0.1}, 1.0));
  lib.push_back(make_quadratic_field(saddle, {0.3, 0.0, 0.0}));
  lib.push_back(make_trig_product_field(n, 1.0, {1.0, 1.0, 1.0}, {0.0, 1.5707963267948966, 0.0}));
  lib.push_back(make_trig_product_field(n, 0.7, {2.0, 1.3, 0.9}, {0.4, 0.1, 1.2}));
  lib.push_back(make_trig_product_field(n, 1.9, {0.5, 3.1, 1.7}, {1.1, 2.3, 0.6}));
  lib.push_back(make_trig_product_field(n, 0.3, {4.0, 2.5, 3.0}, {0.0, 0.7, 2.9}));
  lib.push_back(make_gaussian_field(n, 1.0, {0.0, 0.0, 0.0}, 0.6));
  lib.push_back(make_gaussian_field(n, -2.5, {0.3, -0.2, 0.1}, 0.9));
  lib.push_back(make_gaussian_field(n, 0.8, {-0.5, 0.4, -0.3}, 0.35));
  lib.push_back(make_exp_linear_field(n, 0.5, {0.9, -0.4, 0.2}));
  lib.push_back(make_exp_linear_field(n, -1.2, {-0.3, 1.1, 0.5}));
  lib.push_back(make_cubic_ridge_field(n, 0.4, {1.0, 0.5, -0.2}, 0.1));
  lib.push_back(make_cubic_ridge_field(n, -0.9, {-0.3, 0.8, 0.6}, -0.4));
  lib.push_back(make_sum_field(lib[1], lib[5]));
  lib.push_back(make_sum_field(lib[0], lib[8]));
  lib.push_back(make_sum_field(lib[4], lib[13]));
  lib.push_back(make_sum_field(lib[2], lib[11]));
  lib.push_back(make_sum_field(lib[6], lib[9]));
  lib.push_back(make_sum_field(lib[3], lib[7]));
  lib.push_back(make_sum_field(lib[10], lib[14]));
  return lib;
}

}  // namespace plap
