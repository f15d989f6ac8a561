#pragma once

#include "cogslam/geometry.hpp"
#include "cogslam/local_map.hpp"

#include <memory>

namespace cogslam {

struct OdometryConfig {
  double resolution = 0.05;  // finest-level cell size, meters
  double map_size = 40.0;    // grid extent per side, meters, centered on start
  int max_iterations = 20;   // Gauss-Newton iterations per pyramid level
  double epsilon = 1e-5;     // convergence threshold on the update norm
  double hit = 0.9;          // log-odds increment for beam endpoints
  double miss = -0.4;        // log-odds decrement for traversed cells
  double l_min = -4.0;
  double l_max = 4.0;
  // Map pyramid depth; level l doubles the cell size. The coarse levels
  // widen the convergence basin to cover realistic per-scan motion; a single
  // 0.05 m level only pulls in offsets of a few centimeters.
  int levels = 3;
  double cond_threshold = 1e6;  // normal-matrix condition limit

  void validate() const;
};

// Terms of one Gauss-Newton linearization of the map-match objective
// sum_i M*(world(pose, e_i)) around `pose`: normal matrix, gradient side,
// and the objective value itself.
struct MatchAccum {
  double h[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double g[3] = {0, 0, 0};
  double score = 0.0;
};

MatchAccum accumulate_match_terms(const ContinuousMapView& view,
                                  const PointSet& points, const Pose& pose);

struct MatchResult {
  PoseDelta delta;  // pose correction in the map frame
  double score = 0.0;
  int iterations = 0;
  bool low_confidence = false;
};

struct OdometryStepResult {
  PoseDelta delta;      // motion since the previous scan, robot frame
  PoseDelta delta_map;  // the same motion in the odometry map frame
  double score = 0.0;
  int iterations = 0;
  bool low_confidence = false;
};

// Scan-to-map odometry against a rolling local occupancy grid. The first
// scan seeds the map; every later scan is matched against the map by
// Gauss-Newton on the interpolated occupancy field, then integrated at the
// refined pose.
class Odometry {
 public:
  explicit Odometry(const OdometryConfig& cfg);

  const OdometryConfig& config() const { return cfg_; }
  const Pose& pose() const { return pose_; }
  int levels() const { return static_cast<int>(maps_.size()); }
  const LocalMap& map(int level = 0) const { return *maps_.at(level); }

  // Refines the current pose against the map without mutating any state.
  // Levels run coarse to fine, each warm-started from the previous one.
  MatchResult match_scan(const Scan& scan) const;

  // Rasterizes the scan into every pyramid level at the given pose.
  void integrate_scan(const Scan& scan, const Pose& pose);

  // Match + pose update + integration. The first call only seeds the map
  // and reports zero motion. A degenerate match (featureless geometry)
  // leaves the pose unchanged and sets low_confidence; the scan is still
  // integrated so the map keeps tracking the environment.
  OdometryStepResult step(const Scan& scan);

 private:
  OdometryConfig cfg_;
  Pose pose_;
  std::vector<std::unique_ptr<LocalMap>> maps_;
  bool seeded_ = false;
};

}  // namespace cogslam
