#include "cogslam/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cogslam {

namespace {

constexpr double kMinSegmentLength = 1e-12;
// Ranges clamped away from zero so noisy readings stay in (0, range_max].
constexpr double kMinRange = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double cross(double ax, double ay, double bx, double by) {
  return ax * by - ay * bx;
}

// Distance along the ray (origin, direction) to `seg`, or +inf when the ray
// misses it. Rays parallel to a segment never hit it (walls have no width).
double ray_segment_distance(const Point2& origin, double dir_x, double dir_y,
                            const Segment& seg) {
  const double ex = seg.b.x - seg.a.x;
  const double ey = seg.b.y - seg.a.y;
  const double denom = cross(dir_x, dir_y, ex, ey);
  if (std::abs(denom) < 1e-15) {
    return std::numeric_limits<double>::infinity();
  }
  const double ox = seg.a.x - origin.x;
  const double oy = seg.a.y - origin.y;
  const double t = cross(ox, oy, ex, ey) / denom;
  const double u = cross(ox, oy, dir_x, dir_y) / denom;
  if (t <= 1e-12 || u < 0.0 || u > 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  return t;
}

}  // namespace

World World::from_segments(std::vector<Segment> segments) {
  if (segments.empty()) {
    throw std::invalid_argument("world: needs at least one segment");
  }
  World world;
  world.bounds.min = {std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
  world.bounds.max = {-std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  for (const Segment& s : segments) {
    if (!std::isfinite(s.a.x) || !std::isfinite(s.a.y) ||
        !std::isfinite(s.b.x) || !std::isfinite(s.b.y)) {
      throw std::invalid_argument("world: segment with non-finite coordinate");
    }
    if (std::hypot(s.b.x - s.a.x, s.b.y - s.a.y) < kMinSegmentLength) {
      throw std::invalid_argument("world: zero-length segment");
    }
    world.bounds.min.x = std::min({world.bounds.min.x, s.a.x, s.b.x});
    world.bounds.min.y = std::min({world.bounds.min.y, s.a.y, s.b.y});
    world.bounds.max.x = std::max({world.bounds.max.x, s.a.x, s.b.x});
    world.bounds.max.y = std::max({world.bounds.max.y, s.a.y, s.b.y});
  }
  world.segments = std::move(segments);
  return world;
}

std::vector<Segment> box_segments(double x0, double y0, double x1, double y1) {
  return {
      {{x0, y0}, {x1, y0}},
      {{x1, y0}, {x1, y1}},
      {{x1, y1}, {x0, y1}},
      {{x0, y1}, {x0, y0}},
  };
}

World load_world(std::istream& in) {
  std::vector<Segment> segments;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    Segment seg;
    if (!(ss >> seg.a.x)) continue;  // blank or comment-only line
    if (!(ss >> seg.a.y >> seg.b.x >> seg.b.y)) {
      throw std::runtime_error("world file line " + std::to_string(line_no) +
                               ": expected `x1 y1 x2 y2`");
    }
    double extra;
    if (ss >> extra) {
      throw std::runtime_error("world file line " + std::to_string(line_no) +
                               ": trailing fields");
    }
    segments.push_back(seg);
  }
  if (segments.empty()) {
    throw std::runtime_error("world file: no segments");
  }
  return World::from_segments(std::move(segments));
}

void LidarModel::validate() const {
  if (beam_count < 2) throw std::invalid_argument("lidar: beam_count must be >= 2");
  if (!(fov > 0.0) || fov > 2.0 * kPi + 1e-12) {
    throw std::invalid_argument("lidar: fov must be in (0, 2*pi]");
  }
  if (!(range_max > 0.0)) throw std::invalid_argument("lidar: range_max must be positive");
  if (range_noise_sigma < 0.0) {
    throw std::invalid_argument("lidar: range_noise_sigma must be >= 0");
  }
}

void TrajectoryScript::validate() const {
  if (waypoints.empty()) throw std::invalid_argument("trajectory: no waypoints");
  if (!(scan_rate > 0.0)) throw std::invalid_argument("trajectory: scan_rate must be positive");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (!(waypoints[i].t > waypoints[i - 1].t)) {
      throw std::invalid_argument("trajectory: arrival times must strictly increase");
    }
  }
}

Scan raycast(const World& world, const Pose& pose, const LidarModel& model,
             std::uint64_t rng_seed) {
  model.validate();
  if (!world.bounds.contains({pose.x, pose.y})) {
    throw std::invalid_argument("raycast: pose outside world bounds");
  }

  Scan scan;
  scan.angle_min = model.angle_min;
  scan.angle_increment = model.angle_increment();
  scan.range_max = model.range_max;
  scan.ranges.assign(model.beam_count, Scan::kInvalidRange);

  const int n = model.beam_count;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double angle = pose.theta + scan.angle_min + i * scan.angle_increment;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& seg : world.segments) {
      best = std::min(best, ray_segment_distance({pose.x, pose.y}, dx, dy, seg));
    }
    if (best <= model.range_max) {
      scan.ranges[i] = best;
    }
  }

  // Noise is drawn serially in beam order so results do not depend on how the
  // geometric loop above was scheduled.
  if (model.range_noise_sigma > 0.0) {
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> noise(0.0, model.range_noise_sigma);
    for (int i = 0; i < n; ++i) {
      if (!scan.beam_valid(i)) continue;
      const double r = scan.ranges[i] + noise(rng);
      scan.ranges[i] = std::clamp(r, kMinRange, model.range_max);
    }
  }
  return scan;
}

Pose interpolate_pose(const TrajectoryScript& script, double t) {
  const auto& wp = script.waypoints;
  if (t <= wp.front().t) return wp.front().pose;
  if (t >= wp.back().t) return wp.back().pose;
  std::size_t hi = 1;
  while (wp[hi].t < t) ++hi;
  const Waypoint& a = wp[hi - 1];
  const Waypoint& b = wp[hi];
  const double s = (t - a.t) / (b.t - a.t);
  Pose out;
  out.x = a.pose.x + s * (b.pose.x - a.pose.x);
  out.y = a.pose.y + s * (b.pose.y - a.pose.y);
  out.theta = normalize_angle(a.pose.theta +
                              s * normalize_angle(b.pose.theta - a.pose.theta));
  return out;
}

std::vector<SimFrame> run_trajectory(const World& world, const LidarModel& model,
                                     const TrajectoryScript& script,
                                     std::uint64_t rng_seed) {
  script.validate();
  model.validate();

  const double t0 = script.waypoints.front().t;
  const double t1 = script.waypoints.back().t;
  const double dt = 1.0 / script.scan_rate;

  std::vector<double> times;
  const long steps = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
  times.reserve(steps + 2);
  for (long k = 0; k <= steps; ++k) {
    times.push_back(t0 + k * dt);
  }
  if (t1 - times.back() > 1e-9) {
    times.push_back(t1);  // inclusive final endpoint
  }

  std::vector<SimFrame> frames;
  frames.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    SimFrame frame;
    frame.t = times[k];
    frame.truth_pose = interpolate_pose(script, frame.t);
    if (!world.bounds.contains({frame.truth_pose.x, frame.truth_pose.y})) {
      throw std::invalid_argument("trajectory leaves world bounds at t=" +
                                  std::to_string(frame.t));
    }
    frame.scan = raycast(world, frame.truth_pose, model,
                         splitmix64(rng_seed ^ (0x9E3779B97F4A7C15ull * (k + 1))));
    frame.scan.timestamp = frame.t;
    frames.push_back(std::move(frame));
  }
  return frames;
}

TrajectoryScript load_trajectory(std::istream& in) {
  TrajectoryScript script;
  bool have_rate = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "scan_rate") {
      if (!(ss >> script.scan_rate)) {
        throw std::runtime_error("trajectory file line " + std::to_string(line_no) +
                                 ": expected `scan_rate <hz>`");
      }
      have_rate = true;
      continue;
    }
    Waypoint wp;
    try {
      wp.t = std::stod(first);
    } catch (const std::exception&) {
      throw std::runtime_error("trajectory file line " + std::to_string(line_no) +
                               ": expected `t x y theta` or `scan_rate <hz>`");
    }
    if (!(ss >> wp.pose.x >> wp.pose.y >> wp.pose.theta)) {
      throw std::runtime_error("trajectory file line " + std::to_string(line_no) +
                               ": expected `t x y theta`");
    }
    wp.pose.theta = normalize_angle(wp.pose.theta);
    script.waypoints.push_back(wp);
  }
  if (!have_rate) {
    throw std::runtime_error("trajectory file: missing `scan_rate` line");
  }
  script.validate();
  return script;
}

}  // namespace cogslam
