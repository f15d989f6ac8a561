#include "cogslam/geometry.hpp"

#include <stdexcept>
#include <string>

namespace cogslam {

double normalize_angle(double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("normalize_angle: non-finite angle");
  }
  return angle - 2.0 * kPi * std::floor((angle + kPi) / (2.0 * kPi));
}

Pose compose(const Pose& pose, const PoseDelta& delta) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  Pose out;
  out.x = pose.x + c * delta.dx - s * delta.dy;
  out.y = pose.y + s * delta.dx + c * delta.dy;
  out.theta = normalize_angle(pose.theta + delta.dtheta);
  return out;
}

Point2 transform_point(const Pose& pose, const Point2& p) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return Point2{pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y};
}

std::size_t Scan::valid_beam_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (beam_valid(i)) ++n;
  }
  return n;
}

void Scan::validate() const {
  if (ranges.size() < 2) {
    throw std::invalid_argument("scan: needs at least 2 beams");
  }
  if (!(angle_increment > 0.0)) {
    throw std::invalid_argument("scan: angle_increment must be positive");
  }
  if (!std::isfinite(range_max) || !(range_max > 0.0)) {
    throw std::invalid_argument("scan: range_max must be finite and positive");
  }
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const double r = ranges[i];
    if (r == kInvalidRange) continue;
    if (!(r > 0.0) || r > range_max) {
      throw std::invalid_argument("scan: beam " + std::to_string(i) +
                                  " outside (0, range_max]");
    }
  }
}

PointSet scan_to_points(const Scan& scan) {
  PointSet out;
  out.points.reserve(scan.beam_count());
  for (std::size_t i = 0; i < scan.beam_count(); ++i) {
    if (!scan.beam_valid(i)) continue;
    const double a = scan.beam_angle(i);
    out.points.push_back(
        Point2{scan.ranges[i] * std::cos(a), scan.ranges[i] * std::sin(a)});
  }
  if (out.points.empty()) {
    throw std::invalid_argument("scan_to_points: no valid beams");
  }
  return out;
}

}  // namespace cogslam
