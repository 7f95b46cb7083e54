#include "plap/grid.hpp"

#include <cmath>
#include <sstream>

#include "plap/error.hpp"

namespace plap {
namespace {

constexpr double kRatioTol = 1e-9;

int integral_ratio(double num, double den, const char* what) {
  const double ratio = num / den;
  const double rounded = std::round(ratio);
  if (!std::isfinite(ratio) || std::abs(ratio - rounded) > kRatioTol || rounded < 1.0) {
    std::ostringstream os;
    os.precision(17);
    os << "non-commensurate grid: " << what << " = " << ratio << " is not an integer";
    throw ConfigError(os.str());
  }
  return static_cast<int>(rounded);
}

struct LevelRange {
  int bottom;
  int top;
  bool has_bottom;
};

LevelRange level_range(const Grid& grid, const ParabolicCylinder& cyl) {
  const double base = cyl.t_top - cyl.radius * cyl.radius;
  // First level strictly above base - dt/2, last level at or below t_top.
  const double base_index = (base - grid.t_begin()) / grid.dt();
  int bottom = static_cast<int>(std::floor(base_index - 0.5)) + 1;
  int top = static_cast<int>(std::floor((cyl.t_top - grid.t_begin()) / grid.dt() + kRatioTol));
  bool has_bottom = true;
  if (bottom < 0) {
    bottom = 0;
    has_bottom = false;
  }
  if (top > grid.levels() - 1) top = grid.levels() - 1;
  return {bottom, top, has_bottom};
}

enum class Ring { kOut, kCore, kShell };

Ring ring_of(const Grid& grid, const ParabolicCylinder& cyl, const Point& x) {
  const double dist = norm(x - cyl.center);
  if (dist > cyl.radius + kRatioTol * grid.h()) return Ring::kOut;
  return dist < cyl.radius - 0.5 * grid.h() ? Ring::kCore : Ring::kShell;
}

}  // namespace

Grid make_grid(int n, double half_width, double h, double dt, double t_begin, double t_end) {
  if (n < 1 || n > kMaxDim) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (!(half_width > 0.0)) throw ConfigError("grid half_width must be positive");
  if (!(h > 0.0)) throw ConfigError("grid h must be positive");
  if (!(dt > 0.0)) throw ConfigError("grid dt must be positive");
  if (!(t_begin < t_end)) throw ConfigError("grid requires t_begin < t_end");

  Grid g;
  g.n_ = n;
  g.half_width_ = half_width;
  g.h_ = h;
  g.dt_ = dt;
  g.t_begin_ = t_begin;
  g.t_end_ = t_end;
  g.nodes_per_axis_ = integral_ratio(2.0 * half_width, h, "2*half_width/h") + 1;
  g.levels_ = integral_ratio(t_end - t_begin, dt, "(t_end-t_begin)/dt") + 1;
  g.node_count_ = 1;
  for (int a = 0; a < n; ++a) g.node_count_ *= static_cast<std::size_t>(g.nodes_per_axis_);
  return g;
}

Grid Grid::coarsened_in_time(int stride) const {
  if (stride < 1 || (levels_ - 1) % stride != 0)
    throw ConfigError("time stride must divide the number of time steps");
  Grid g = *this;
  g.dt_ = dt_ * stride;
  g.levels_ = (levels_ - 1) / stride + 1;
  return g;
}

bool Grid::same_as(const Grid& o) const {
  return n_ == o.n_ && half_width_ == o.half_width_ && h_ == o.h_ && dt_ == o.dt_ &&
         t_begin_ == o.t_begin_ && t_end_ == o.t_end_;
}

std::size_t CylinderNodes::interior_count() const {
  if (empty()) return 0;
  return core.size() * static_cast<std::size_t>(top_level - first_upper_level() + 1);
}

std::size_t CylinderNodes::lateral_count() const {
  if (empty()) return 0;
  return shell.size() * static_cast<std::size_t>(top_level - first_upper_level() + 1);
}

std::size_t CylinderNodes::bottom_count() const {
  return (empty() || !has_bottom) ? 0 : ball.size();
}

CylinderNodes cylinder_nodes(const Grid& grid, const ParabolicCylinder& cyl) {
  CylinderNodes out;
  const auto range = level_range(grid, cyl);
  out.bottom_level = range.bottom;
  out.top_level = range.top;
  out.has_bottom = range.has_bottom;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    switch (ring_of(grid, cyl, grid.point(node))) {
      case Ring::kOut:
        continue;
      case Ring::kCore:
        out.core.push_back(node);
        break;
      case Ring::kShell:
        out.shell.push_back(node);
        break;
    }
    out.ball.push_back(node);
  }
  return out;
}

NodeClass classify(const Grid& grid, const ParabolicCylinder& cyl, std::size_t node, int level) {
  const auto range = level_range(grid, cyl);
  if (level < range.bottom || level > range.top) return NodeClass::kOutside;
  const Ring ring = ring_of(grid, cyl, grid.point(node));
  if (ring == Ring::kOut) return NodeClass::kOutside;
  if (range.has_bottom && level == range.bottom) return NodeClass::kBottom;
  return ring == Ring::kCore ? NodeClass::kInterior : NodeClass::kLateral;
}

}  // namespace plap
