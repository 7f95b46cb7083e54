#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

/// Scalar values on every (node, level) of a grid. Level-major storage: the
/// values of one time level are contiguous.
///
/// `domain` is the cylinder on which the field was computed, when known. The
/// estimators use it to keep derivative stencils away from its parabolic
/// boundary.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  explicit SpaceTimeField(Grid grid, double fill = 0.0)
      : grid_(std::move(grid)), values_(grid_.node_count() * grid_.levels(), fill) {}

  const Grid& grid() const { return grid_; }

  double at(std::size_t node, int level) const { return values_[offset(node, level)]; }
  double& at(std::size_t node, int level) { return values_[offset(node, level)]; }

  std::span<const double> level(int m) const {
    return {values_.data() + offset(0, m), grid_.node_count()};
  }
  std::span<double> level(int m) {
    return {values_.data() + offset(0, m), grid_.node_count()};
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  const std::optional<ParabolicCylinder>& domain() const { return domain_; }
  void set_domain(const ParabolicCylinder& cyl) { domain_ = cyl; }

 private:
  std::size_t offset(std::size_t node, int level) const {
    return static_cast<std::size_t>(level) * grid_.node_count() + node;
  }

  Grid grid_;
  std::vector<double> values_;
  std::optional<ParabolicCylinder> domain_;
};

/// Field whose value at every node is f(x, t).
SpaceTimeField sample_field(const Grid& grid, const std::function<double(const Point&, double)>& f);

}  // namespace plap
