#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace cogslam {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to [-pi, pi). Throws std::invalid_argument on non-finite input.
double normalize_angle(double angle);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, kept in [-pi, pi)
};

struct PoseDelta {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

// Applies a robot-frame delta: translation rotated by the pose heading,
// headings added and wrapped.
Pose compose(const Pose& pose, const PoseDelta& delta);

// Maps a sensor/robot-frame point into the world frame of `pose`.
Point2 transform_point(const Pose& pose, const Point2& p);

// One lidar revolution. Beam i points at angle_min + i * angle_increment in
// the sensor frame. Beams that returned nothing hold kInvalidRange; they are
// never encoded as a fake in-range number.
struct Scan {
  static constexpr double kInvalidRange = std::numeric_limits<double>::infinity();

  double timestamp = 0.0;
  double angle_min = 0.0;
  double angle_increment = 0.0;
  double range_max = 0.0;
  std::vector<double> ranges;

  std::size_t beam_count() const { return ranges.size(); }
  bool beam_valid(std::size_t i) const { return std::isfinite(ranges[i]); }
  double beam_angle(std::size_t i) const {
    return angle_min + static_cast<double>(i) * angle_increment;
  }
  std::size_t valid_beam_count() const;

  // Throws std::invalid_argument when the scan violates its contract
  // (< 2 beams, non-positive increment, range outside (0, range_max]).
  void validate() const;
};

struct PointSet {
  std::vector<Point2> points;
};

// Converts valid beams to sensor-frame Cartesian endpoints; invalid beams are
// skipped. Throws when no beam is valid.
PointSet scan_to_points(const Scan& scan);

}  // namespace cogslam
