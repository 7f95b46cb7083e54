#include <gtest/gtest.h>

#include <cmath>

#include "plap/coeffs.hpp"
#include "plap/error.hpp"
#include "plap/rng.hpp"
#include "plap/types.hpp"

using namespace plap;

namespace {

SymMatrix random_sym(SplitMix64& rng, int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, rng.uniform(-2.0, 2.0));
  return m;
}

// det(m - x I) by cofactor expansion.
double char_poly(const SymMatrix& m, double x) {
  const int n = m.dim();
  auto e = [&](int i, int j) { return m(i, j) - (i == j ? x : 0.0); };
  if (n == 1) return e(0, 0);
  if (n == 2) return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

}  // namespace

TEST(Params, RejectsBadInput) {
  EXPECT_THROW(make_params(1.0, 0.1, 2), ConfigError);
  EXPECT_THROW(make_params(0.5, 0.1, 2), ConfigError);
  EXPECT_THROW(make_params(2.0, -0.1, 2), ConfigError);
  EXPECT_THROW(make_params(2.0, 0.1, 4), ConfigError);
  EXPECT_THROW(make_params(2.0, 0.1, 0), ConfigError);
  EXPECT_NO_THROW(make_params(1.0001, 0.0, 3));
}

TEST(Coeffs, EllipticityBounds) {
  auto b = ellipticity_bounds(make_params(2.0, 0.0, 2));
  EXPECT_EQ(b.lambda, 1.0);
  EXPECT_EQ(b.Lambda, 1.0);
  b = ellipticity_bounds(make_params(3.0, 0.0, 2));
  EXPECT_EQ(b.lambda, 1.0);
  EXPECT_EQ(b.Lambda, 2.0);
  b = ellipticity_bounds(make_params(1.5, 0.0, 2));
  EXPECT_EQ(b.lambda, 0.5);
  EXPECT_EQ(b.Lambda, 1.0);
}

TEST(Coeffs, IdentityCases) {
  const auto a = coeff_matrix({0.3, -1.7, 0.0}, make_params(2.0, 0.4, 2));
  EXPECT_EQ(a(0, 0), 1.0);
  EXPECT_EQ(a(1, 1), 1.0);
  EXPECT_EQ(a(0, 1), 0.0);

  const auto b = coeff_matrix({0.0, 0.0, 0.0}, make_params(5.0, 0.1, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(b(i, j), i == j ? 1.0 : 0.0);
}

TEST(Coeffs, AlongGradient) {
  const auto a = coeff_matrix({1.0, 0.0, 0.0}, make_params(3.0, 0.0, 2));
  EXPECT_DOUBLE_EQ(a(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(a(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(a(0, 1), 0.0);
}

TEST(Coeffs, DegenerateGradient) {
  EXPECT_THROW(coeff_matrix({0.0, 0.0, 0.0}, make_params(3.0, 0.0, 2)), DomainError);
  EXPECT_THROW(eigen_within_bounds({0.0, 0.0, 0.0}, make_params(3.0, 0.0, 2)), DomainError);
}

TEST(Coeffs, EigenExamples) {
  auto e = eigen_within_bounds({1.0, 0.0, 0.0}, make_params(3.0, 1.0, 2));
  ASSERT_EQ(e.eigenvalues.size(), 2u);
  EXPECT_TRUE(e.within);
  EXPECT_DOUBLE_EQ(e.eigenvalues[0], 1.0);
  EXPECT_DOUBLE_EQ(e.eigenvalues[1], 1.5);

  e = eigen_within_bounds({0.0, 2.0, 0.0}, make_params(1.5, 0.0, 2));
  EXPECT_TRUE(e.within);
  EXPECT_DOUBLE_EQ(e.eigenvalues[0], 0.5);
  EXPECT_DOUBLE_EQ(e.eigenvalues[1], 1.0);

  e = eigen_within_bounds({0.4, -3.0, 1.0}, make_params(2.0, 0.2, 3));
  EXPECT_TRUE(e.within);
  for (double v : e.eigenvalues) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Coeffs, RandomEllipticity) {
  SplitMix64 rng(7);
  for (int s = 0; s < 100000; ++s) {
    const int n = 1 + s % 3;
    const auto params = make_params(rng.uniform(1.05, 10.0), rng.uniform(0.0, 1.0), n);
    Point q{};
    for (int a = 0; a < n; ++a) q[a] = rng.uniform(-5.0, 5.0);
    const auto e = eigen_within_bounds(q, params);
    ASSERT_TRUE(e.within);
    ASSERT_GE(e.margin, -1e-12);
  }
}

TEST(Coeffs, TraceFormula) {
  SplitMix64 rng(11);
  for (int s = 0; s < 1000; ++s) {
    const int n = 1 + s % 3;
    const auto params = make_params(rng.uniform(1.1, 6.0), rng.uniform(0.01, 1.0), n);
    Point q{};
    for (int a = 0; a < n; ++a) q[a] = rng.uniform(-3.0, 3.0);
    const double q2 = dot(q, q);
    const double expect = n + (params.p - 2.0) * q2 / (q2 + params.eps * params.eps);
    EXPECT_NEAR(coeff_matrix(q, params).trace(), expect, 1e-12);
  }
}

TEST(Coeffs, LargeGradientLimit) {
  SplitMix64 rng(5);
  for (int s = 0; s < 1000; ++s) {
    const auto params = make_params(rng.uniform(1.1, 8.0), rng.uniform(0.01, 0.5), 3);
    Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double scale = rng.uniform(10.0, 100.0) * params.eps / norm(q);
    q = scale * q;
    const auto a = coeff_matrix(q, params);
    const auto limit = coeff_matrix((1.0 / norm(q)) * q, make_params(params.p, 0.0, 3));
    double diff = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) diff += std::pow(a(i, j) - limit(i, j), 2);
    EXPECT_LE(std::sqrt(diff), 2.0 * std::abs(params.p - 2.0) * params.eps * params.eps / dot(q, q) + 1e-14);
  }
}

TEST(SymMatrix, EigenvaluesMatchCharacteristicPolynomial) {
  SplitMix64 rng(3);
  for (int s = 0; s < 3000; ++s) {
    const int n = 1 + s % 3;
    const auto m = random_sym(rng, n);
    const auto ev = symmetric_eigenvalues(m);
    const double scale = std::max(1.0, std::sqrt(m.frobenius_sq()));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(char_poly(m, ev[i]) / (scale * scale * scale), 0.0, 1e-10);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += ev[i];
    EXPECT_NEAR(sum, m.trace(), 1e-12);
    for (int i = 1; i < n; ++i) EXPECT_LE(ev[i - 1], ev[i]);
  }
}

TEST(SymMatrix, SymmetricByStorage) {
  SymMatrix m(3);
  m.set(2, 0, 4.0);
  EXPECT_EQ(m(0, 2), 4.0);
  EXPECT_EQ(m(2, 0), 4.0);
  EXPECT_EQ(m.frobenius_sq(), 32.0);
}
