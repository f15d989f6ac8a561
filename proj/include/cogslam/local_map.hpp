#pragma once

#include "cogslam/geometry.hpp"

namespace cogslam {

// Square log-odds occupancy grid. Cell (i, j) covers the world rectangle
// [origin + (i, j) * resolution, origin + (i+1, j+1) * resolution); its
// sample point for interpolation is the cell center.
class LocalMap {
 public:
  LocalMap(double resolution, double extent_m, Point2 origin, double l_min,
           double l_max);

  double resolution() const { return resolution_; }
  int size() const { return size_; }
  const Point2& origin() const { return origin_; }
  double l_min() const { return l_min_; }
  double l_max() const { return l_max_; }

  bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < size_ && j < size_;
  }
  double log_odds(int i, int j) const { return cells_[index(i, j)]; }
  double probability(int i, int j) const {
    return 1.0 / (1.0 + std::exp(-cells_[index(i, j)]));
  }

  int world_to_cell_x(double x) const {
    return static_cast<int>(std::floor((x - origin_.x) / resolution_));
  }
  int world_to_cell_y(double y) const {
    return static_cast<int>(std::floor((y - origin_.y) / resolution_));
  }
  bool contains_world(const Point2& p) const {
    return inside(world_to_cell_x(p.x), world_to_cell_y(p.y));
  }

  // Applies one beam: miss decrement on every cell the ray crosses before the
  // endpoint cell, hit increment on the endpoint cell, clamped to
  // [l_min, l_max]. Rays leaving the grid are truncated at the border.
  void integrate_ray(const Point2& from, const Point2& to, double hit,
                     double miss);

  // Integrates all valid beams of a scan taken at `pose`. Throws when the
  // sensor position is outside the grid.
  void integrate_scan(const Scan& scan, const Pose& pose, double hit,
                      double miss);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * size_ + i;
  }
  void add(int i, int j, double delta);

  double resolution_;
  int size_;
  Point2 origin_;
  double l_min_;
  double l_max_;
  std::vector<double> cells_;
};

struct Interpolation {
  double value = 0.0;  // occupancy probability in [0, 1]
  double dx = 0.0;     // d value / d world x
  double dy = 0.0;
};

// Evaluates the grid as a continuous occupancy field: bilinear interpolation
// of the four surrounding cell probabilities plus the analytic gradient of
// that interpolant. Queries outside the sampled area read as unknown
// (value 0, zero gradient) rather than faulting.
class ContinuousMapView {
 public:
  explicit ContinuousMapView(const LocalMap& map) : map_(map) {}

  Interpolation interpolate(double x, double y) const;

 private:
  const LocalMap& map_;
};

}  // namespace cogslam
