#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "plap/types.hpp"

namespace plap {

/// Uniform space-time grid on the box [-half_width, half_width]^n times
/// [t_begin, t_end]. Nodes are indexed lexicographically with axis 0 slowest;
/// coordinates are derived from integer indices on demand.
class Grid {
 public:
  int dim() const { return n_; }
  double half_width() const { return half_width_; }
  double h() const { return h_; }
  double dt() const { return dt_; }
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }

  int nodes_per_axis() const { return nodes_per_axis_; }
  int levels() const { return levels_; }
  std::size_t node_count() const { return node_count_; }

  // Exact at both box faces and antisymmetric about the centre index.
  double coord(int i) const {
    const int cells = nodes_per_axis_ - 1;
    return half_width_ * static_cast<double>(2 * i - cells) / static_cast<double>(cells);
  }

  double time(int level) const {
    const int steps = levels_ - 1;
    return (t_begin_ * static_cast<double>(steps - level) + t_end_ * static_cast<double>(level)) /
           static_cast<double>(steps);
  }

  std::array<int, kMaxDim> unravel(std::size_t node) const {
    std::array<int, kMaxDim> idx{};
    for (int a = n_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(node % nodes_per_axis_);
      node /= nodes_per_axis_;
    }
    return idx;
  }

  std::size_t ravel(const std::array<int, kMaxDim>& idx) const {
    std::size_t node = 0;
    for (int a = 0; a < n_; ++a) node = node * nodes_per_axis_ + idx[a];
    return node;
  }

  Point point(std::size_t node) const {
    const auto idx = unravel(node);
    Point x{};
    for (int a = 0; a < n_; ++a) x[a] = coord(idx[a]);
    return x;
  }

  // Linear-index offset of a unit step along axis a.
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = n_ - 1; a > axis; --a) s *= nodes_per_axis_;
    return s;
  }

  // True when the node has both neighbours along every axis.
  bool off_faces(std::size_t node) const {
    const auto idx = unravel(node);
    for (int a = 0; a < n_; ++a)
      if (idx[a] == 0 || idx[a] == nodes_per_axis_ - 1) return false;
    return true;
  }

  /// Same box and spatial step, time step multiplied by `stride` levels.
  Grid coarsened_in_time(int stride) const;

  bool same_as(const Grid& other) const;

 private:
  friend Grid make_grid(int, double, double, double, double, double);

  int n_ = 1;
  double half_width_ = 1.0;
  double h_ = 1.0;
  double dt_ = 1.0;
  double t_begin_ = 0.0;
  double t_end_ = 1.0;
  int nodes_per_axis_ = 1;
  int levels_ = 1;
  std::size_t node_count_ = 1;
};

/// Validates commensurability of h with the box and of dt with the time
/// interval; throws ConfigError naming the offending ratio.
Grid make_grid(int n, double half_width, double h, double dt, double t_begin, double t_end);

/// Q_r(x0, t0) = B_r(x0) x (t0 - r^2, t0].
struct ParabolicCylinder {
  Point center{};
  double t_top = 0.0;
  double radius = 1.0;

  bool contains(const Point& x, double t) const {
    return norm(x - center) < radius && t > t_top - radius * radius && t <= t_top;
  }
};

enum class NodeClass { kOutside, kInterior, kLateral, kBottom };

/// Grid nodes in the closure of a cylinder, partitioned into interior,
/// lateral boundary and bottom. Stored as spatial node lists plus a level
/// range, so the space-time sets are products:
///   bottom   = bottom_level            x ball
///   lateral  = (bottom_level, top]     x shell
///   interior = (bottom_level, top]     x core
/// `has_bottom` is false when the cylinder base lies below the grid.
struct CylinderNodes {
  std::vector<std::size_t> ball;   // |x - x0| <= r, sorted
  std::vector<std::size_t> shell;  // r - h/2 <= |x - x0| <= r
  std::vector<std::size_t> core;   // |x - x0| < r - h/2
  int bottom_level = 0;
  int top_level = -1;
  bool has_bottom = false;

  bool empty() const { return ball.empty() || top_level < bottom_level; }
  int first_upper_level() const { return has_bottom ? bottom_level + 1 : bottom_level; }

  std::size_t interior_count() const;
  std::size_t lateral_count() const;
  std::size_t bottom_count() const;
  std::size_t total_count() const { return interior_count() + lateral_count() + bottom_count(); }
};

CylinderNodes cylinder_nodes(const Grid& grid, const ParabolicCylinder& cyl);

NodeClass classify(const Grid& grid, const ParabolicCylinder& cyl, std::size_t node, int level);

}  // namespace plap
