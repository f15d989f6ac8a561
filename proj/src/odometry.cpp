#include "cogslam/odometry.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace cogslam {

void OdometryConfig::validate() const {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("odometry.resolution must be positive");
  }
  if (!(map_size > 2.0 * resolution)) {
    throw std::invalid_argument("odometry.map_size must exceed two cells");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("odometry.max_iterations must be >= 1");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("odometry.epsilon must be positive");
  }
  if (!(hit > 0.0) || !(miss < 0.0)) {
    throw std::invalid_argument(
        "odometry.hit must be positive and odometry.miss negative");
  }
  if (!(l_min < l_max)) {
    throw std::invalid_argument("odometry.l_min must be below odometry.l_max");
  }
  if (levels < 1 || levels > 8) {
    throw std::invalid_argument("odometry.levels must be in [1, 8]");
  }
  if (!(cond_threshold >= 1.0)) {
    throw std::invalid_argument("odometry.cond_threshold must be >= 1");
  }
}

MatchAccum accumulate_match_terms(const ContinuousMapView& view,
                                  const PointSet& points, const Pose& pose) {
  const std::size_t n = points.points.size();
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);

  // Phase one: independent per-point terms. Phase two reduces them in index
  // order so the result does not depend on the thread count.
  struct PointTerms {
    double jx, jy, jt, r, m;
  };
  std::vector<PointTerms> terms(n);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < static_cast<long>(n); ++k) {
    const Point2& e = points.points[k];
    const double wx = pose.x + c * e.x - s * e.y;
    const double wy = pose.y + s * e.x + c * e.y;
    const Interpolation m = view.interpolate(wx, wy);
    // Jacobian of M* through the rigid transform: spatial gradient for the
    // translation entries, gradient dotted with the rotation derivative of
    // the endpoint for the heading entry.
    terms[k].jx = m.dx;
    terms[k].jy = m.dy;
    terms[k].jt = m.dx * (-s * e.x - c * e.y) + m.dy * (c * e.x - s * e.y);
    terms[k].r = 1.0 - m.value;
    terms[k].m = m.value;
  }

  MatchAccum acc;
  for (std::size_t k = 0; k < n; ++k) {
    const PointTerms& t = terms[k];
    const double j[3] = {t.jx, t.jy, t.jt};
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) acc.h[a][b] += j[a] * j[b];
      acc.g[a] += j[a] * t.r;
    }
    acc.score += t.m;
  }
  acc.h[1][0] = acc.h[0][1];
  acc.h[2][0] = acc.h[0][2];
  acc.h[2][1] = acc.h[1][2];
  return acc;
}

namespace {

constexpr int kMaxHalvings = 6;

// Solves the normal equations if the system is well conditioned; returns
// false for a degenerate (rank-deficient or near-singular) linearization.
bool solve_normal_equations(const MatchAccum& acc, double cond_threshold,
                            double out[3]) {
  Eigen::Matrix3d h;
  Eigen::Vector3d g;
  for (int a = 0; a < 3; ++a) {
    g(a) = acc.g[a];
    for (int b = 0; b < 3; ++b) h(a, b) = acc.h[a][b];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(h);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > cond_threshold) return false;
  const Eigen::Vector3d d = h.ldlt().solve(g);
  if (!d.allFinite()) return false;
  out[0] = d(0);
  out[1] = d(1);
  out[2] = d(2);
  return true;
}

Pose apply_map_delta(const Pose& p, double dx, double dy, double dt) {
  return {p.x + dx, p.y + dy, normalize_angle(p.theta + dt)};
}

// Gauss-Newton on one map level. Returns the refined pose; `degenerate`
// reports whether the very first linearization already failed (no progress
// possible at this level).
Pose match_level(const ContinuousMapView& view, const PointSet& points,
                 Pose pose, const OdometryConfig& cfg, int& iterations,
                 bool& degenerate) {
  degenerate = false;
  MatchAccum acc = accumulate_match_terms(view, points, pose);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    double d[3];
    if (!solve_normal_equations(acc, cfg.cond_threshold, d)) {
      degenerate = (it == 0);
      return pose;
    }
    ++iterations;

    // Step halving keeps the objective non-decreasing: shrink the update
    // until the matched occupancy sum improves or the budget runs out.
    double scale = 1.0;
    Pose candidate = apply_map_delta(pose, d[0], d[1], d[2]);
    MatchAccum cand_acc = accumulate_match_terms(view, points, candidate);
    int halvings = 0;
    while (cand_acc.score < acc.score && halvings < kMaxHalvings) {
      scale *= 0.5;
      ++halvings;
      candidate = apply_map_delta(pose, scale * d[0], scale * d[1],
                                  scale * d[2]);
      cand_acc = accumulate_match_terms(view, points, candidate);
    }
    if (cand_acc.score < acc.score) return pose;  // no improving step found

    pose = candidate;
    acc = cand_acc;
    const double norm = scale * std::sqrt(d[0] * d[0] + d[1] * d[1] +
                                          d[2] * d[2]);
    if (norm < cfg.epsilon) break;
  }
  return pose;
}

}  // namespace

Odometry::Odometry(const OdometryConfig& cfg) : cfg_(cfg), pose_{0, 0, 0} {
  cfg_.validate();
  for (int l = 0; l < cfg_.levels; ++l) {
    const double res = cfg_.resolution * static_cast<double>(1 << l);
    maps_.push_back(std::make_unique<LocalMap>(
        res, cfg_.map_size, Point2{-cfg_.map_size / 2.0, -cfg_.map_size / 2.0},
        cfg_.l_min, cfg_.l_max));
  }
}

MatchResult Odometry::match_scan(const Scan& scan) const {
  if (!seeded_) {
    throw std::logic_error("match_scan called before any scan was integrated");
  }
  const PointSet points = scan_to_points(scan);

  MatchResult result;
  Pose pose = pose_;
  bool finest_degenerate = false;
  for (int l = levels() - 1; l >= 0; --l) {
    const ContinuousMapView view(*maps_[l]);
    bool degenerate = false;
    pose = match_level(view, points, pose, cfg_, result.iterations,
                       degenerate);
    if (l == 0) finest_degenerate = degenerate;
  }
  if (finest_degenerate) {
    // Coarse levels may have moved the estimate, but without a usable
    // finest-level system the whole refinement is untrustworthy.
    result.delta = {0, 0, 0};
    result.low_confidence = true;
    result.score =
        accumulate_match_terms(ContinuousMapView(*maps_[0]), points, pose_)
            .score;
    return result;
  }
  result.delta = {pose.x - pose_.x, pose.y - pose_.y,
                  normalize_angle(pose.theta - pose_.theta)};
  result.score =
      accumulate_match_terms(ContinuousMapView(*maps_[0]), points, pose).score;
  return result;
}

void Odometry::integrate_scan(const Scan& scan, const Pose& pose) {
  for (auto& map : maps_) {
    map->integrate_scan(scan, pose, cfg_.hit, cfg_.miss);
  }
  seeded_ = true;
}

OdometryStepResult Odometry::step(const Scan& scan) {
  OdometryStepResult out;
  if (!seeded_) {
    integrate_scan(scan, pose_);
    seeded_ = true;
    return out;
  }
  const MatchResult m = match_scan(scan);
  out.score = m.score;
  out.iterations = m.iterations;
  out.low_confidence = m.low_confidence;
  if (!m.low_confidence) {
    // The matcher works in the map frame; consumers that compose egocentric
    // motion get the same delta rotated into the pre-scan robot frame.
    const double c = std::cos(pose_.theta);
    const double s = std::sin(pose_.theta);
    out.delta = {c * m.delta.dx + s * m.delta.dy,
                 -s * m.delta.dx + c * m.delta.dy, m.delta.dtheta};
    out.delta_map = m.delta;
    pose_ = apply_map_delta(pose_, m.delta.dx, m.delta.dy, m.delta.dtheta);
  }
  integrate_scan(scan, pose_);
  return out;
}

}  // namespace cogslam
