#include "cogslam/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cogslam {

void SlamConfig::validate() const {
  odometry.validate();
  local_view.validate();
  pose_cells.validate();
  relax.validate();
  if (closure_relax_iterations < 1) {
    throw std::invalid_argument(
        "pipeline.closure_relax_iterations must be >= 1");
  }
  if (!(node_travel_m > 0.0) || !(node_travel_rad > 0.0)) {
    throw std::invalid_argument("pipeline node travel thresholds must be > 0");
  }
  if (!(closure_pc_distance > 0.0)) {
    throw std::invalid_argument("pipeline.closure_pc_distance must be > 0");
  }
}

namespace {

double toroidal_gap(double a, double b, int n) {
  double d = std::fabs(a - b);
  d = std::fmod(d, static_cast<double>(n));
  return std::min(d, n - d);
}

double packet_link_distance(const DecodedPose& dec, const PcCoord& pc,
                            const PoseCellConfig& cfg) {
  const double dx = toroidal_gap(dec.cx, pc.x, cfg.n_x);
  const double dy = toroidal_gap(dec.cy, pc.y, cfg.n_y);
  const double dt = toroidal_gap(dec.ctheta, pc.theta, cfg.n_theta);
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

}  // namespace

SlamPipeline::SlamPipeline(const SlamConfig& cfg)
    : cfg_(cfg),
      odometry_(cfg.odometry),
      views_(cfg.local_view),
      cells_(cfg.pose_cells) {
  cfg_.validate();
}

StepReport SlamPipeline::step(const Scan& scan) {
  StepReport report;
  report.t = scan.timestamp;
  const double dt = first_step_ ? 0.0 : scan.timestamp - last_t_;
  last_t_ = scan.timestamp;
  first_step_ = false;

  const OdometryStepResult odo = odometry_.step(scan);
  report.odom_delta = odo.delta;
  report.odom_low_confidence = odo.low_confidence;

  const ViewMatch match = views_.process(scan);
  report.active_view = match.active_index;
  report.is_new_view = match.is_new;
  report.view_best_s = match.best_s;

  // The shift operator translates every theta slice the same way, so it
  // needs the map-frame delta; the packet then tracks map position and
  // revisits land back on their learned coordinates.
  cells_.path_integrate(odo.delta_map);
  if (match.is_new) {
    links_.learn(match.active_index, cells_.argmax());
    cells_.reset_match_streak();
  } else {
    cells_.inject_view(views_.activity(), links_);
  }
  cells_.attractor_step();
  const DecodedPose dec = cells_.decode();
  report.decoded_pose = dec.pose;
  report.packet_mass = dec.packet_mass;

  map_.integrate_odometry(odo.delta, dt);
  travel_dist_ += std::hypot(odo.delta.dx, odo.delta.dy);
  travel_rot_ += std::fabs(odo.delta.dtheta);

  const PcCoord pc{dec.cx, dec.cy, dec.ctheta};
  bool node_event = false;
  if (map_.empty()) {
    map_.create_experience(pc, match.active_index);
    node_event = true;
  } else if (!match.is_new &&
             cells_.match_streak() >= cfg_.pose_cells.consec_threshold) {
    // The view is a known one and injection has been running long enough
    // for the packet to relocate; close a loop if the packet really sits
    // near an experience recorded with this view.
    std::size_t best_id = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t id : map_.experiences_for_view(match.active_index)) {
      const double d = packet_link_distance(dec, map_.node(id).pc,
                                            cfg_.pose_cells);
      if (d < best_dist) {
        best_dist = d;
        best_id = id;
      }
    }
    if (best_dist <= cfg_.closure_pc_distance &&
        best_id != map_.current_id() &&
        !map_.has_edge_between(map_.current_id(), best_id)) {
      map_.close_loop(best_id);
      report.loop_closed = true;
      report.closed_onto = best_id;
      node_event = true;
    }
  }
  if (!node_event && !map_.empty()) {
    if (match.is_new || travel_dist_ > cfg_.node_travel_m ||
        travel_rot_ > cfg_.node_travel_rad) {
      map_.create_experience(pc, match.active_index);
      node_event = true;
    }
  }
  if (node_event) {
    travel_dist_ = 0.0;
    travel_rot_ = 0.0;
  }

  map_.relax(cfg_.relax, report.loop_closed ? cfg_.closure_relax_iterations
                                            : cfg_.relax.iterations_per_step);

  report.map_pose_estimate = map_.current_pose_estimate();
  report.node_count = map_.size();
  report.edge_count = map_.edges().size();
  return report;
}

RunResult run_slam(const SlamConfig& cfg, const std::vector<Scan>& scans,
                   const std::vector<Pose>* truth) {
  SlamPipeline pipeline(cfg);
  return run_slam_with(pipeline, scans, truth);
}

RunResult run_slam_with(SlamPipeline& pipeline, const std::vector<Scan>& scans,
                        const std::vector<Pose>* truth) {
  if (scans.empty()) {
    throw std::invalid_argument("run_slam requires at least one scan");
  }
  if (truth && truth->size() != scans.size()) {
    throw std::invalid_argument(
        "ground truth must be index-aligned with the scans");
  }

  RunResult result;
  result.reports.reserve(scans.size());
  for (std::size_t i = 0; i < scans.size(); ++i) {
    try {
      result.reports.push_back(pipeline.step(scans[i]));
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(i) + " (t=" +
                               std::to_string(scans[i].timestamp) +
                               "): " + e.what());
    }
  }

  result.stats.n_steps = scans.size();
  if (truth) {
    const Pose& anchor = (*truth)[0];
    const double c = std::cos(anchor.theta);
    const double s = std::sin(anchor.theta);
    double sum = 0.0, sumsq = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < scans.size(); ++i) {
      const Pose& est = result.reports[i].map_pose_estimate;
      const double wx = anchor.x + c * est.x - s * est.y;
      const double wy = anchor.y + s * est.x + c * est.y;
      const double ex = wx - (*truth)[i].x;
      const double ey = wy - (*truth)[i].y;
      const double e = std::hypot(ex, ey);
      result.err_x.push_back(ex);
      result.err_y.push_back(ey);
      result.err.push_back(e);
      sum += e;
      sumsq += e * e;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    result.stats.has_truth = true;
    result.stats.mean_err = sum / scans.size();
    result.stats.min_err = lo;
    result.stats.max_err = hi;
    result.stats.rmse = std::sqrt(sumsq / scans.size());
  }
  return result;
}

}  // namespace cogslam
