#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <utility>

namespace plap {

inline constexpr int kMaxDim = 3;

// Spatial point or vector. Components past the active dimension are zero.
using Point = std::array<double, kMaxDim>;

inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point operator+(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point operator*(double s, const Point& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

/// Symmetric n x n matrix (n <= 3). Only the upper triangle is stored, so
/// symmetry holds by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n) { assert(n >= 1 && n <= kMaxDim); }

  static SymMatrix identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
  }

  int dim() const { return n_; }

  double operator()(int i, int j) const { return upper_[slot(i, j)]; }
  void set(int i, int j, double v) { upper_[slot(i, j)] = v; }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  // Frobenius norm squared: sum over all n^2 entries.
  double frobenius_sq() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return s;
  }

  Point apply(const Point& v) const {
    Point r{};
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  // Frobenius inner product a:m.
  double contract(const SymMatrix& m) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * m(i, j);
    return s;
  }

 private:
  static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    // (0,0)(0,1)(0,2)(1,1)(1,2)(2,2)
    static constexpr int base[3] = {0, 3, 5};
    return base[i] + (j - i);
  }

  int n_ = 1;
  std::array<double, 6> upper_{};
};

// Fully symmetric third-derivative tensor, stored densely for simplicity.
struct Tensor3 {
  std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim> v{};
  double operator()(int i, int j, int k) const { return v[i][j][k]; }
  double& operator()(int i, int j, int k) { return v[i][j][k]; }

  // Copies the entry with sorted indices to every permutation, so that
  // symmetry is exact regardless of how the entries were computed.
  void symmetrize(int n) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const double s = v[i][j][k];
          v[i][k][j] = v[j][i][k] = v[j][k][i] = v[k][i][j] = v[k][j][i] = s;
        }
  }
};

/// Eigenvalues of a symmetric matrix in ascending order, computed in closed
/// form (quadratic formula for n = 2, trigonometric method for n = 3).
std::array<double, kMaxDim> symmetric_eigenvalues(const SymMatrix& m);

}  // namespace plap
