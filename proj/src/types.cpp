#include "plap/types.hpp"

#include <algorithm>
#include <numbers>

namespace plap {

std::array<double, kMaxDim> symmetric_eigenvalues(const SymMatrix& m) {
  std::array<double, kMaxDim> ev{};
  const int n = m.dim();
  if (n == 1) {
    ev[0] = m(0, 0);
    return ev;
  }
  if (n == 2) {
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const double radius = std::hypot(half_diff, m(0, 1));
    ev[0] = mean - radius;
    ev[1] = mean + radius;
    return ev;
  }
  const double off = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  if (off == 0.0) {
    ev = {m(0, 0), m(1, 1), m(2, 2)};
    std::sort(ev.begin(), ev.end());
    return ev;
  }
  const double q = m.trace() / 3.0;
  const double d0 = m(0, 0) - q;
  const double d1 = m(1, 1) - q;
  const double d2 = m(2, 2) - q;
  const double p = std::sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off) / 6.0);
  // det((A - qI) / p) / 2
  const double det = d0 * (d1 * d2 - m(1, 2) * m(1, 2)) -
                     m(0, 1) * (m(0, 1) * d2 - m(1, 2) * m(0, 2)) +
                     m(0, 2) * (m(0, 1) * m(1, 2) - d1 * m(0, 2));
  const double r = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double largest = q + 2.0 * p * std::cos(phi);
  const double smallest = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  ev = {smallest, 3.0 * q - largest - smallest, largest};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace plap
