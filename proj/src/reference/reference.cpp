#include "reference.hpp"

#include <algorithm>
#include <random>

namespace cogslam::reference {

namespace {

constexpr int kKernelRadius = 3;  // matches the production attractor kernels

double cross(double ax, double ay, double bx, double by) {
  return ax * by - ay * bx;
}

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

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

std::vector<double> axis_kernel(double sigma) {
  std::vector<double> k(2 * kKernelRadius + 1);
  double sum = 0.0;
  for (int r = -kKernelRadius; r <= kKernelRadius; ++r) {
    k[r + kKernelRadius] = std::exp(-0.5 * r * r / (sigma * sigma));
    sum += k[r + kKernelRadius];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> dense_convolve(const std::vector<double>& act,
                                   const PoseCellConfig& cfg, double sigma) {
  const std::vector<double> k = axis_kernel(sigma);
  const int nx = cfg.n_x, ny = cfg.n_y, nt = cfg.n_theta;
  auto idx = [&](int x, int y, int t) {
    return (static_cast<std::size_t>(t) * ny + y) * nx + x;
  };
  std::vector<double> out(act.size(), 0.0);
  for (int t = 0; t < nt; ++t) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        double v = 0.0;
        for (int rt = -kKernelRadius; rt <= kKernelRadius; ++rt) {
          for (int ry = -kKernelRadius; ry <= kKernelRadius; ++ry) {
            for (int rx = -kKernelRadius; rx <= kKernelRadius; ++rx) {
              v += k[rx + kKernelRadius] * k[ry + kKernelRadius] *
                   k[rt + kKernelRadius] *
                   act[idx(wrap(x - rx, nx), wrap(y - ry, ny),
                           wrap(t - rt, nt))];
            }
          }
        }
        out[idx(x, y, t)] = v;
      }
    }
  }
  return out;
}

}  // namespace

Scan raycast_serial(const World& world, const Pose& pose,
                    const LidarModel& model, std::uint64_t rng_seed) {
  model.validate();
  if (!world.bounds.contains({pose.x, pose.y})) {
    throw std::invalid_argument("raycast: pose outside world bounds");
  }
  Scan scan;
  scan.angle_min = model.angle_min;
  scan.angle_increment = model.angle_increment();
  scan.range_max = model.range_max;
  scan.ranges.assign(model.beam_count, Scan::kInvalidRange);
  for (int i = 0; i < model.beam_count; ++i) {
    const double angle =
        pose.theta + scan.angle_min + i * scan.angle_increment;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& seg : world.segments) {
      best =
          std::min(best, ray_segment_distance({pose.x, pose.y}, dx, dy, seg));
    }
    if (best <= model.range_max) scan.ranges[i] = best;
  }
  if (model.range_noise_sigma > 0.0) {
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> noise(0.0, model.range_noise_sigma);
    for (int i = 0; i < model.beam_count; ++i) {
      if (!scan.beam_valid(i)) continue;
      scan.ranges[i] =
          std::clamp(scan.ranges[i] + noise(rng), 1e-6, model.range_max);
    }
  }
  return scan;
}

MatchAccum accumulate_match_terms_serial(const ContinuousMapView& view,
                                         const PointSet& points,
                                         const Pose& pose) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  MatchAccum acc;
  for (const Point2& e : points.points) {
    const Interpolation m =
        view.interpolate(pose.x + c * e.x - s * e.y, pose.y + s * e.x + c * e.y);
    const double j[3] = {m.dx, m.dy,
                         m.dx * (-s * e.x - c * e.y) +
                             m.dy * (c * e.x - s * e.y)};
    const double r = 1.0 - m.value;
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) acc.h[a][b] += j[a] * j[b];
      acc.g[a] += j[a] * r;
    }
    acc.score += m.value;
  }
  acc.h[1][0] = acc.h[0][1];
  acc.h[2][0] = acc.h[0][2];
  acc.h[2][1] = acc.h[1][2];
  return acc;
}

std::vector<double> attractor_step_dense(const std::vector<double>& act,
                                         const PoseCellConfig& cfg) {
  const std::size_t seed =
      std::max_element(act.begin(), act.end()) - act.begin();
  const std::vector<double> excite = dense_convolve(act, cfg, cfg.excite_sigma);
  const std::vector<double> inhibit =
      dense_convolve(act, cfg, cfg.inhibit_sigma);
  std::vector<double> out(act.size());
  for (std::size_t i = 0; i < act.size(); ++i) {
    const double v = act[i] + excite[i] - inhibit[i] - cfg.global_inhibition;
    out[i] = v > 0.0 ? v : 0.0;
  }
  double total = 0.0;
  for (double v : out) total += v;
  if (total <= 0.0) {
    out[seed] = 1.0;
    total = 1.0;
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> path_integrate_dense(const std::vector<double>& act,
                                         const PoseCellConfig& cfg,
                                         const PoseDelta& delta) {
  const double s[3] = {cfg.k_x() * delta.dx, cfg.k_y() * delta.dy,
                       cfg.k_theta() * delta.dtheta};
  int whole[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    whole[a] = static_cast<int>(std::floor(s[a]));
    frac[a] = s[a] - whole[a];
  }
  const int nx = cfg.n_x, ny = cfg.n_y, nt = cfg.n_theta;
  auto idx = [&](int x, int y, int t) {
    return (static_cast<std::size_t>(t) * ny + y) * nx + x;
  };
  std::vector<double> out(act.size(), 0.0);
  for (int t = 0; t < nt; ++t) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        const double mass = act[idx(x, y, t)];
        if (mass == 0.0) continue;
        for (int bt = 0; bt < 2; ++bt) {
          for (int by = 0; by < 2; ++by) {
            for (int bx = 0; bx < 2; ++bx) {
              const double w = (bx ? frac[0] : 1.0 - frac[0]) *
                               (by ? frac[1] : 1.0 - frac[1]) *
                               (bt ? frac[2] : 1.0 - frac[2]);
              out[idx(wrap(x + whole[0] + bx, nx), wrap(y + whole[1] + by, ny),
                      wrap(t + whole[2] + bt, nt))] += w * mass;
            }
          }
        }
      }
    }
  }
  return out;
}

void relax_serial(std::vector<Pose>& poses,
                  const std::vector<Transition>& edges,
                  const RelaxConfig& cfg, int iterations) {
  const std::size_t n = poses.size();
  std::vector<std::vector<std::size_t>> out_edges(n), in_edges(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out_edges[edges[e].from].push_back(e);
    in_edges[edges[e].to].push_back(e);
  }
  std::vector<double> cx(n), cy(n), ct(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const Pose& pi = poses[i];
      double sx = 0.0, sy = 0.0, st = 0.0;
      for (std::size_t e : out_edges[i]) {
        const Pose& pj = poses[edges[e].to];
        sx += pj.x - pi.x - edges[e].delta.dx;
        sy += pj.y - pi.y - edges[e].delta.dy;
        st += normalize_angle(pj.theta - pi.theta - edges[e].delta.dtheta);
      }
      for (std::size_t e : in_edges[i]) {
        const Pose& pk = poses[edges[e].from];
        if (cfg.use_printed_incoming_sign) {
          sx += pk.x - pi.x - edges[e].delta.dx;
          sy += pk.y - pi.y - edges[e].delta.dy;
          st += normalize_angle(pk.theta - pi.theta - edges[e].delta.dtheta);
        } else {
          sx += pk.x + edges[e].delta.dx - pi.x;
          sy += pk.y + edges[e].delta.dy - pi.y;
          st += normalize_angle(pk.theta + edges[e].delta.dtheta - pi.theta);
        }
      }
      double scale = cfg.a;
      if (cfg.normalize_by_degree) {
        const std::size_t deg = out_edges[i].size() + in_edges[i].size();
        scale /= static_cast<double>(deg == 0 ? 1 : deg);
      }
      cx[i] = scale * sx;
      cy[i] = scale * sy;
      ct[i] = scale * st;
    }
    for (std::size_t i = 0; i < n; ++i) {
      poses[i].x += cx[i];
      poses[i].y += cy[i];
      poses[i].theta = normalize_angle(poses[i].theta + ct[i]);
    }
  }
}

}  // namespace cogslam::reference
