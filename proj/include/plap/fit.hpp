#pragma once

#include <span>

namespace plap {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 distinct x.
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace plap
