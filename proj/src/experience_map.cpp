#include "cogslam/experience_map.hpp"

#include <stdexcept>

namespace cogslam {

void RelaxConfig::validate() const {
  if (!(a > 0.0) || a > 0.5) {
    throw std::invalid_argument("relax.a must be in (0, 0.5]");
  }
  if (iterations_per_step < 1) {
    throw std::invalid_argument("relax.iterations_per_step must be >= 1");
  }
}

std::size_t ExperienceMap::current_id() const {
  if (nodes_.empty()) {
    throw std::logic_error("experience map is empty");
  }
  return current_;
}

std::size_t ExperienceMap::degree(std::size_t id) const {
  return out_edges_.at(id).size() + in_edges_.at(id).size();
}

bool ExperienceMap::has_edge_between(std::size_t a, std::size_t b) const {
  for (std::size_t e : out_edges_.at(a)) {
    if (edges_[e].to == b) return true;
  }
  for (std::size_t e : in_edges_.at(a)) {
    if (edges_[e].from == b) return true;
  }
  return false;
}

const std::vector<std::size_t>& ExperienceMap::experiences_for_view(
    std::size_t view_index) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_view_.find(view_index);
  return it == by_view_.end() ? kNone : it->second;
}

void ExperienceMap::integrate_odometry(const PoseDelta& robot_delta,
                                       double dt) {
  if (!std::isfinite(robot_delta.dx) || !std::isfinite(robot_delta.dy) ||
      !std::isfinite(robot_delta.dtheta)) {
    throw std::invalid_argument("odometry delta must be finite");
  }
  const double base = nodes_.empty() ? 0.0 : nodes_[current_].pose.theta;
  const double heading = normalize_angle(base + pending_.dtheta);
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  pending_.dx += c * robot_delta.dx - s * robot_delta.dy;
  pending_.dy += s * robot_delta.dx + c * robot_delta.dy;
  pending_.dtheta = normalize_angle(pending_.dtheta + robot_delta.dtheta);
  pending_dt_ += dt;
}

Pose ExperienceMap::current_pose_estimate() const {
  if (nodes_.empty()) {
    throw std::logic_error("experience map is empty");
  }
  const Pose& p = nodes_[current_].pose;
  return {p.x + pending_.dx, p.y + pending_.dy,
          normalize_angle(p.theta + pending_.dtheta)};
}

void ExperienceMap::reset_pending() {
  pending_ = {0, 0, 0};
  pending_dt_ = 0.0;
}

void ExperienceMap::add_edge(std::size_t from, std::size_t to) {
  edges_.push_back(Transition{from, to, pending_, pending_dt_});
  out_edges_[from].push_back(edges_.size() - 1);
  in_edges_[to].push_back(edges_.size() - 1);
}

std::size_t ExperienceMap::create_experience(const PcCoord& pc,
                                             std::size_t view_index) {
  const std::size_t id = nodes_.size();
  Experience node;
  node.id = id;
  node.pc = pc;
  node.view_index = view_index;
  if (nodes_.empty()) {
    node.pose = {0, 0, 0};  // the first experience anchors the map
  } else {
    const Pose& p = nodes_[current_].pose;
    node.pose = {p.x + pending_.dx, p.y + pending_.dy,
                 normalize_angle(p.theta + pending_.dtheta)};
  }
  nodes_.push_back(node);
  out_edges_.emplace_back();
  in_edges_.emplace_back();
  by_view_[view_index].push_back(id);
  if (id != 0) {
    add_edge(current_, id);
  }
  current_ = id;
  reset_pending();
  return id;
}

void ExperienceMap::close_loop(std::size_t matched_id) {
  if (matched_id >= nodes_.size()) {
    throw std::invalid_argument("close_loop on unknown experience id");
  }
  if (matched_id == current_) {
    throw std::invalid_argument("close_loop onto the current experience");
  }
  add_edge(current_, matched_id);
  current_ = matched_id;
  reset_pending();
}

double ExperienceMap::sum_squared_residual() const {
  double sum = 0.0;
  for (const Transition& e : edges_) {
    const Pose& pi = nodes_[e.from].pose;
    const Pose& pj = nodes_[e.to].pose;
    const double rx = pj.x - pi.x - e.delta.dx;
    const double ry = pj.y - pi.y - e.delta.dy;
    const double rt = normalize_angle(pj.theta - pi.theta - e.delta.dtheta);
    sum += rx * rx + ry * ry + rt * rt;
  }
  return sum;
}

RelaxStats ExperienceMap::relax(const RelaxConfig& cfg, int iterations) {
  cfg.validate();
  RelaxStats stats;
  stats.residual_before = sum_squared_residual();
  stats.iterations = iterations;
  if (edges_.empty()) {
    stats.residual_after = stats.residual_before;
    return stats;
  }

  const long n = static_cast<long>(nodes_.size());
  std::vector<double> cx(n), cy(n), ct(n);
  double previous = stats.residual_before;
  for (int it = 0; it < iterations; ++it) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      const Pose& pi = nodes_[i].pose;
      double sx = 0.0, sy = 0.0, st = 0.0;
      for (std::size_t e : out_edges_[i]) {
        const Transition& edge = edges_[e];
        const Pose& pj = nodes_[edge.to].pose;
        sx += pj.x - pi.x - edge.delta.dx;
        sy += pj.y - pi.y - edge.delta.dy;
        st += normalize_angle(pj.theta - pi.theta - edge.delta.dtheta);
      }
      for (std::size_t e : in_edges_[i]) {
        const Transition& edge = edges_[e];
        const Pose& pk = nodes_[edge.from].pose;
        if (cfg.use_printed_incoming_sign) {
          sx += pk.x - pi.x - edge.delta.dx;
          sy += pk.y - pi.y - edge.delta.dy;
          st += normalize_angle(pk.theta - pi.theta - edge.delta.dtheta);
        } else {
          sx += pk.x + edge.delta.dx - pi.x;
          sy += pk.y + edge.delta.dy - pi.y;
          st += normalize_angle(pk.theta + edge.delta.dtheta - pi.theta);
        }
      }
      double scale = cfg.a;
      if (cfg.normalize_by_degree) {
        const std::size_t deg = out_edges_[i].size() + in_edges_[i].size();
        scale /= static_cast<double>(deg == 0 ? 1 : deg);
      }
      cx[i] = scale * sx;
      cy[i] = scale * sy;
      ct[i] = scale * st;
    }
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      nodes_[i].pose.x += cx[i];
      nodes_[i].pose.y += cy[i];
      nodes_[i].pose.theta = normalize_angle(nodes_[i].pose.theta + ct[i]);
    }
    const double now = sum_squared_residual();
    if (now > previous) ++residual_increases_;
    previous = now;
  }
  stats.residual_after = previous;
  return stats;
}

}  // namespace cogslam
