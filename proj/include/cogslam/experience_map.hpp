#pragma once

#include "cogslam/geometry.hpp"

#include <unordered_map>

namespace cogslam {

struct RelaxConfig {
  double a = 0.5;             // correction factor per iteration
  int iterations_per_step = 1;
  // The incoming-edge term of the update can be evaluated two ways. The
  // default pulls node i toward p_k + delta_ki, which makes a consistent
  // graph an exact fixed point. The alternative uses p_k - p_i - delta_ki
  // verbatim, which relaxes toward a different (shifted) equilibrium; it is
  // kept selectable for comparison.
  bool use_printed_incoming_sign = false;
  // Divide each node's summed correction by its edge degree. Keeps the
  // iteration contractive on graphs with high-degree nodes; without it,
  // corrections can overshoot and diverge once a node has more than four
  // incident edges.
  bool normalize_by_degree = true;

  void validate() const;
};

// Continuous pose-cell coordinates captured when an experience was created.
struct PcCoord {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct Experience {
  std::size_t id = 0;
  PcCoord pc;
  std::size_t view_index = 0;
  Pose pose;  // map-frame estimate, revised by relaxation
};

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  PoseDelta delta;  // accumulated odometry, map frame
  double dt = 0.0;  // elapsed seconds
};

struct RelaxStats {
  double residual_before = 0.0;  // summed squared edge residual
  double residual_after = 0.0;
  int iterations = 0;
};

// Topological map of distinct experiences. Edges carry the odometry
// accumulated between node events; poses are map-frame estimates obtained by
// chaining edge deltas and cleaned up by iterative relaxation after loops
// close. Odometry between node events is held as a pending delta so the
// current pose estimate stays continuous.
class ExperienceMap {
 public:
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const Experience& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<Transition>& edges() const { return edges_; }
  std::size_t current_id() const;
  std::size_t degree(std::size_t id) const;
  bool has_edge_between(std::size_t a, std::size_t b) const;

  // Experiences that were created while the given view was active.
  const std::vector<std::size_t>& experiences_for_view(
      std::size_t view_index) const;

  // Folds one robot-frame odometry increment into the pending delta,
  // rotating it by the current heading estimate so the accumulation stays
  // in the map frame.
  void integrate_odometry(const PoseDelta& robot_delta, double dt);
  const PoseDelta& pending_delta() const { return pending_; }
  double pending_dt() const { return pending_dt_; }

  // Current node pose plus pending odometry.
  Pose current_pose_estimate() const;

  // Appends a node at the pose implied by the pending delta, linked from the
  // current node, and makes it current. The first node anchors the map at
  // the origin. Resets the pending delta.
  std::size_t create_experience(const PcCoord& pc, std::size_t view_index);

  // Connects the current node to an existing one with the pending delta;
  // the matched node becomes current. Resets the pending delta.
  void close_loop(std::size_t matched_id);

  // Jacobi relaxation: every node's correction is computed from the poses of
  // the previous sweep, then all corrections are applied at once. Heading
  // residuals are wrapped before scaling.
  RelaxStats relax(const RelaxConfig& cfg, int iterations);

  // Diagnostic: number of relax sweeps whose summed squared residual rose.
  long residual_increase_count() const { return residual_increases_; }

  double sum_squared_residual() const;

 private:
  void add_edge(std::size_t from, std::size_t to);
  void reset_pending();

  std::vector<Experience> nodes_;
  std::vector<Transition> edges_;
  std::vector<std::vector<std::size_t>> out_edges_;  // node -> edge indices
  std::vector<std::vector<std::size_t>> in_edges_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_view_;
  std::size_t current_ = 0;
  PoseDelta pending_{0, 0, 0};
  double pending_dt_ = 0.0;
  long residual_increases_ = 0;
};

}  // namespace cogslam
