#pragma once

#include "cogslam/experience_map.hpp"
#include "cogslam/geometry.hpp"
#include "cogslam/local_view.hpp"
#include "cogslam/odometry.hpp"
#include "cogslam/pose_cells.hpp"

#include <cstdint>

namespace cogslam {

struct SlamConfig {
  OdometryConfig odometry;
  LocalViewConfig local_view;
  PoseCellConfig pose_cells;
  RelaxConfig relax;
  int closure_relax_iterations = 20;  // relax budget on loop-closure steps
  double node_travel_m = 0.5;     // spawn a node after this much travel
  double node_travel_rad = 20.0 * kPi / 180.0;  // or this much rotation
  double closure_pc_distance = 3.0;  // packet-to-link gate, cell units
  std::uint64_t seed = 0;  // forwarded to the simulator; the pipeline
                           // itself has no stochastic element

  void validate() const;
};

struct StepReport {
  double t = 0.0;
  PoseDelta odom_delta;  // robot frame
  bool odom_low_confidence = false;
  std::size_t active_view = 0;
  bool is_new_view = false;
  double view_best_s = 0.0;
  Pose decoded_pose;
  double packet_mass = 0.0;
  Pose map_pose_estimate;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  bool loop_closed = false;
  std::size_t closed_onto = 0;  // matched experience id when loop_closed
};

// Per-scan update loop: LiDAR odometry feeds path integration, view matches
// feed calibration injection, and the experience map turns both into the
// exported pose estimate.
class SlamPipeline {
 public:
  explicit SlamPipeline(const SlamConfig& cfg);

  StepReport step(const Scan& scan);

  const SlamConfig& config() const { return cfg_; }
  const Odometry& odometry() const { return odometry_; }
  const LocalViewCells& views() const { return views_; }
  const PoseCellNetwork& pose_cells() const { return cells_; }
  const ViewToPoseLinks& links() const { return links_; }
  const ExperienceMap& map() const { return map_; }

 private:
  SlamConfig cfg_;
  Odometry odometry_;
  LocalViewCells views_;
  PoseCellNetwork cells_;
  ViewToPoseLinks links_;
  ExperienceMap map_;
  double last_t_ = 0.0;
  bool first_step_ = true;
  double travel_dist_ = 0.0;  // since the last node event
  double travel_rot_ = 0.0;
};

struct RunStats {
  bool has_truth = false;
  double mean_err = 0.0;
  double min_err = 0.0;
  double max_err = 0.0;
  double rmse = 0.0;
  std::size_t n_steps = 0;
};

struct RunResult {
  std::vector<StepReport> reports;
  // Per-step estimate-minus-truth, truth frame; empty without ground truth.
  std::vector<double> err_x;
  std::vector<double> err_y;
  std::vector<double> err;
  RunStats stats;
};

// Runs the pipeline over a scan sequence. When `truth` is given it must be
// index-aligned with `scans`; the estimate (which lives in a frame anchored
// at the first pose) is mapped through truth[0] before errors are taken.
RunResult run_slam(const SlamConfig& cfg, const std::vector<Scan>& scans,
                   const std::vector<Pose>* truth);

// Same loop, but on a caller-owned pipeline so its final state (map, views,
// grids) stays inspectable after the run.
RunResult run_slam_with(SlamPipeline& pipeline, const std::vector<Scan>& scans,
                        const std::vector<Pose>* truth);

}  // namespace cogslam
