#include "cogslam/local_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace cogslam {

LocalMap::LocalMap(double resolution, double extent_m, Point2 origin,
                   double l_min, double l_max)
    : resolution_(resolution), origin_(origin), l_min_(l_min), l_max_(l_max) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("map resolution must be positive");
  }
  if (!(extent_m > 0.0) || !std::isfinite(extent_m)) {
    throw std::invalid_argument("map extent must be positive");
  }
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
    throw std::invalid_argument("map origin must be finite");
  }
  if (!(l_min < l_max)) {
    throw std::invalid_argument("log-odds clamp requires l_min < l_max");
  }
  size_ = static_cast<int>(std::ceil(extent_m / resolution - 1e-9));
  if (size_ < 2) {
    throw std::invalid_argument("map must span at least 2 cells per side");
  }
  cells_.assign(static_cast<std::size_t>(size_) * size_, 0.0);
}

void LocalMap::add(int i, int j, double delta) {
  double& cell = cells_[index(i, j)];
  cell = std::clamp(cell + delta, l_min_, l_max_);
}

void LocalMap::integrate_ray(const Point2& from, const Point2& to, double hit,
                             double miss) {
  int ci = world_to_cell_x(from.x);
  int cj = world_to_cell_y(from.y);
  if (!inside(ci, cj)) {
    throw std::invalid_argument("ray origin outside the map");
  }
  const int ei = world_to_cell_x(to.x);
  const int ej = world_to_cell_y(to.y);
  const bool end_inside = inside(ei, ej);

  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const int step_i = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_j = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

  // Parametric distance (in units of the ray length) to the next vertical /
  // horizontal grid line, and the distance between successive lines.
  auto axis_init = [&](double origin_axis, double from_axis, int cell,
                       int step, double d) {
    if (step == 0) return std::numeric_limits<double>::infinity();
    const double boundary =
        origin_axis + (cell + (step > 0 ? 1 : 0)) * resolution_;
    return (boundary - from_axis) / d;
  };
  double t_max_x = axis_init(origin_.x, from.x, ci, step_i, dx);
  double t_max_y = axis_init(origin_.y, from.y, cj, step_j, dy);
  const double t_delta_x =
      step_i == 0 ? std::numeric_limits<double>::infinity()
                  : resolution_ / std::abs(dx);
  const double t_delta_y =
      step_j == 0 ? std::numeric_limits<double>::infinity()
                  : resolution_ / std::abs(dy);

  // Walk cell to cell until the endpoint cell or the grid border. The step
  // bound caps degenerate cases (zero-length rays, accumulated rounding).
  const int max_steps = 2 * (std::abs(ei - ci) + std::abs(ej - cj)) + 4;
  for (int n = 0; n < max_steps; ++n) {
    if (ci == ei && cj == ej) break;
    if (t_max_x >= 1.0 && t_max_y >= 1.0) break;
    add(ci, cj, miss);
    if (t_max_x < t_max_y) {
      t_max_x += t_delta_x;
      ci += step_i;
    } else {
      t_max_y += t_delta_y;
      cj += step_j;
    }
    if (!inside(ci, cj)) return;  // ray leaves the grid, nothing more to mark
  }
  if (end_inside) {
    add(ei, ej, hit);
  }
}

void LocalMap::integrate_scan(const Scan& scan, const Pose& pose, double hit,
                              double miss) {
  const Point2 from{pose.x, pose.y};
  if (!contains_world(from)) {
    throw std::invalid_argument("sensor pose outside the map");
  }
  for (std::size_t i = 0; i < scan.beam_count(); ++i) {
    if (!scan.beam_valid(i)) continue;
    const double angle = pose.theta + scan.beam_angle(i);
    const Point2 to{pose.x + scan.ranges[i] * std::cos(angle),
                    pose.y + scan.ranges[i] * std::sin(angle)};
    integrate_ray(from, to, hit, miss);
  }
}

Interpolation ContinuousMapView::interpolate(double x, double y) const {
  // Sample points sit at cell centers, so shift by half a cell before
  // locating the 2x2 neighborhood.
  const double res = map_.resolution();
  const double u = (x - map_.origin().x) / res - 0.5;
  const double v = (y - map_.origin().y) / res - 0.5;
  const int i0 = static_cast<int>(std::floor(u));
  const int j0 = static_cast<int>(std::floor(v));
  if (i0 < 0 || j0 < 0 || i0 + 1 >= map_.size() || j0 + 1 >= map_.size()) {
    return {};  // outside the sampled area: unknown, flat
  }
  const double fx = u - i0;
  const double fy = v - j0;
  const double p00 = map_.probability(i0, j0);
  const double p10 = map_.probability(i0 + 1, j0);
  const double p01 = map_.probability(i0, j0 + 1);
  const double p11 = map_.probability(i0 + 1, j0 + 1);

  Interpolation out;
  out.value = (1.0 - fy) * ((1.0 - fx) * p00 + fx * p10) +
              fy * ((1.0 - fx) * p01 + fx * p11);
  out.dx = ((1.0 - fy) * (p10 - p00) + fy * (p11 - p01)) / res;
  out.dy = ((1.0 - fx) * (p01 - p00) + fx * (p11 - p10)) / res;
  return out;
}

}  // namespace cogslam
