#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cogslam/geometry.hpp"

namespace cogslam {

struct Segment {
  Point2 a;
  Point2 b;
};

struct Bounds {
  Point2 min;
  Point2 max;
  bool contains(const Point2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct World {
  std::vector<Segment> segments;
  Bounds bounds;

  // Validates the segment list (non-empty, finite, no zero-length walls) and
  // computes the bounding extent. Throws std::invalid_argument otherwise.
  static World from_segments(std::vector<Segment> segments);
};

// Four walls of an axis-aligned rectangular room.
std::vector<Segment> box_segments(double x0, double y0, double x1, double y1);

// Parses a world file: one `x1 y1 x2 y2` segment per line, `#` comments.
// Throws std::runtime_error naming the offending line on malformed input.
World load_world(std::istream& in);

struct LidarModel {
  int beam_count = 360;
  double fov = 2.0 * kPi;
  double range_max = 30.0;
  double range_noise_sigma = 0.0;
  double angle_min = 0.0;

  void validate() const;
  // Beams span [angle_min, angle_min + fov) so a full revolution has no
  // duplicate seam beam.
  double angle_increment() const { return fov / beam_count; }
};

struct Waypoint {
  Pose pose;
  double t = 0.0;
};

struct TrajectoryScript {
  std::vector<Waypoint> waypoints;
  double scan_rate = 5.0;

  void validate() const;
};

struct SimFrame {
  double t = 0.0;
  Pose truth_pose;
  Scan scan;
};

// Casts all beams from `pose` against the world walls: range = nearest
// segment intersection plus per-beam Gaussian noise (seeded, in beam order),
// clamped to (0, range_max]. Beams with no wall inside range_max are invalid.
Scan raycast(const World& world, const Pose& pose, const LidarModel& model,
             std::uint64_t rng_seed);

// Pose on the scripted path at time t: linear in x/y, shortest arc in theta.
Pose interpolate_pose(const TrajectoryScript& script, double t);

// Emits frames every 1/scan_rate from the first waypoint time to the last,
// both endpoints included. Rejects scripts that leave the world bounds,
// naming the offending time.
std::vector<SimFrame> run_trajectory(const World& world, const LidarModel& model,
                                     const TrajectoryScript& script,
                                     std::uint64_t rng_seed);

// Parses a trajectory file: `scan_rate <hz>` line plus `t x y theta`
// waypoint lines, `#` comments. Throws naming the offending line.
TrajectoryScript load_trajectory(std::istream& in);

}  // namespace cogslam
