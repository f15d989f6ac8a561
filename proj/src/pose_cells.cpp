#include "cogslam/pose_cells.hpp"

#include <numeric>
#include <stdexcept>

namespace cogslam {

namespace {

constexpr int kKernelRadius = 3;  // 7-cell support per axis
constexpr int kDecodeRadius = 2;  // 5-cell decoding window per axis

std::vector<double> gaussian_kernel(double sigma) {
  std::vector<double> k(2 * kKernelRadius + 1);
  double sum = 0.0;
  for (int r = -kKernelRadius; r <= kKernelRadius; ++r) {
    k[r + kKernelRadius] = std::exp(-0.5 * r * r / (sigma * sigma));
    sum += k[r + kKernelRadius];
  }
  for (double& v : k) v /= sum;
  return k;
}

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Circular mean of one grid axis: treat index i as angle 2*pi*i/n, average
// the mass-weighted unit vectors, convert back to a fractional index.
double circular_mean_index(double sx, double sy, int n) {
  const double angle = std::atan2(sy, sx);
  double idx = angle * n / (2.0 * kPi);
  if (idx < 0.0) idx += n;
  if (idx >= n) idx -= n;
  return idx;
}

}  // namespace

void PoseCellConfig::validate() const {
  if (n_x < 5 || n_y < 5 || n_theta < 5) {
    throw std::invalid_argument("pose_cells dims must be >= 5 per axis");
  }
  if (!(cell_size_xy > 0.0)) {
    throw std::invalid_argument("pose_cells.cell_size_xy must be positive");
  }
  if (!(excite_sigma > 0.0) || !(inhibit_sigma > 0.0)) {
    throw std::invalid_argument("pose_cells sigmas must be positive");
  }
  if (!(global_inhibition >= 0.0)) {
    throw std::invalid_argument("pose_cells.global_inhibition must be >= 0");
  }
  if (!(k_v >= 0.0)) {
    throw std::invalid_argument("pose_cells.k_v must be >= 0");
  }
  if (consec_threshold < 1) {
    throw std::invalid_argument("pose_cells.consec_threshold must be >= 1");
  }
}

void ViewToPoseLinks::learn(std::size_t view_index, const CellCoord& coord) {
  if (!links_.emplace(view_index, coord).second) {
    throw std::logic_error("view is already linked to a pose-cell coordinate");
  }
}

PoseCellNetwork::PoseCellNetwork(const PoseCellConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  act_.assign(static_cast<std::size_t>(cfg_.n_x) * cfg_.n_y * cfg_.n_theta,
              0.0);
  excite_kernel_ = gaussian_kernel(cfg_.excite_sigma);
  inhibit_kernel_ = gaussian_kernel(cfg_.inhibit_sigma);
  // Start with a packet at the grid center.
  set_cell(cfg_.n_x / 2, cfg_.n_y / 2, cfg_.n_theta / 2, 1.0);
  attractor_step();
}

double PoseCellNetwork::total_activity() const {
  return std::accumulate(act_.begin(), act_.end(), 0.0);
}

void PoseCellNetwork::path_integrate(const PoseDelta& delta) {
  if (!std::isfinite(delta.dx) || !std::isfinite(delta.dy) ||
      !std::isfinite(delta.dtheta)) {
    throw std::invalid_argument("path_integrate requires a finite delta");
  }
  const double s[3] = {cfg_.k_x() * delta.dx, cfg_.k_y() * delta.dy,
                       cfg_.k_theta() * delta.dtheta};
  int whole[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    whole[a] = static_cast<int>(std::floor(s[a]));
    frac[a] = s[a] - whole[a];
  }

  // Source index per axis for the near (b=0) and far (b=1) cube corners.
  const int dims[3] = {cfg_.n_x, cfg_.n_y, cfg_.n_theta};
  std::vector<int> src[3][2];
  for (int a = 0; a < 3; ++a) {
    src[a][0].resize(dims[a]);
    src[a][1].resize(dims[a]);
    for (int i = 0; i < dims[a]; ++i) {
      src[a][0][i] = wrap(i - whole[a], dims[a]);
      src[a][1][i] = wrap(i - whole[a] - 1, dims[a]);
    }
  }
  const double wx[2] = {1.0 - frac[0], frac[0]};
  const double wy[2] = {1.0 - frac[1], frac[1]};
  const double wt[2] = {1.0 - frac[2], frac[2]};

  std::vector<double> next(act_.size());
#pragma omp parallel for schedule(static) collapse(2)
  for (int t = 0; t < cfg_.n_theta; ++t) {
    for (int y = 0; y < cfg_.n_y; ++y) {
      for (int x = 0; x < cfg_.n_x; ++x) {
        double v = 0.0;
        for (int bt = 0; bt < 2; ++bt) {
          for (int by = 0; by < 2; ++by) {
            for (int bx = 0; bx < 2; ++bx) {
              v += wt[bt] * wy[by] * wx[bx] *
                   act_[index(src[0][bx][x], src[1][by][y], src[2][bt][t])];
            }
          }
        }
        next[index(x, y, t)] = v;
      }
    }
  }
  act_ = std::move(next);
}

bool PoseCellNetwork::inject_view(const std::vector<double>& view_activity,
                                  const ViewToPoseLinks& links) {
  bool any_positive = false;
  for (std::size_t i = 0; i < view_activity.size(); ++i) {
    if (view_activity[i] > 0.0 && links.has(i)) {
      any_positive = true;
      break;
    }
  }
  if (!any_positive) {
    match_streak_ = 0;
    return false;
  }
  ++match_streak_;
  if (match_streak_ < cfg_.consec_threshold) return false;
  for (std::size_t i = 0; i < view_activity.size(); ++i) {
    if (view_activity[i] <= 0.0 || !links.has(i)) continue;
    const CellCoord& c = links.coord(i);
    act_[index(c.x, c.y, c.theta)] += cfg_.k_v * view_activity[i];
  }
  return true;
}

void PoseCellNetwork::attractor_step() {
  const CellCoord seed = argmax();
  const int dims[3] = {cfg_.n_x, cfg_.n_y, cfg_.n_theta};

  // Separable wrap-around convolution: one pass per axis, gather form so
  // every output cell is written by exactly one thread.
  const std::size_t strides[3] = {
      1, static_cast<std::size_t>(cfg_.n_x),
      static_cast<std::size_t>(cfg_.n_x) * cfg_.n_y};
  auto convolve = [&](const std::vector<double>& kernel) {
    std::vector<double> a = act_;
    std::vector<double> b(a.size());
    for (int axis = 0; axis < 3; ++axis) {
      const int n = dims[axis];
      const std::size_t stride = strides[axis];
#pragma omp parallel for schedule(static) collapse(2)
      for (int t = 0; t < cfg_.n_theta; ++t) {
        for (int y = 0; y < cfg_.n_y; ++y) {
          for (int x = 0; x < cfg_.n_x; ++x) {
            const int along = axis == 0 ? x : (axis == 1 ? y : t);
            const std::size_t base = index(x, y, t) - along * stride;
            double v = 0.0;
            for (int r = -kKernelRadius; r <= kKernelRadius; ++r) {
              v += kernel[r + kKernelRadius] *
                   a[base + static_cast<std::size_t>(wrap(along - r, n)) *
                                stride];
            }
            b[index(x, y, t)] = v;
          }
        }
      }
      std::swap(a, b);
    }
    return a;
  };

  const std::vector<double> excite = convolve(excite_kernel_);
  const std::vector<double> inhibit = convolve(inhibit_kernel_);

#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(act_.size()); ++i) {
    const double v =
        act_[i] + excite[i] - inhibit[i] - cfg_.global_inhibition;
    act_[i] = v > 0.0 ? v : 0.0;
  }

  double total = total_activity();
  if (total <= 0.0) {
    // Inhibition wiped everything out; restart from the last packet peak.
    act_[index(seed.x, seed.y, seed.theta)] = 1.0;
    total = 1.0;
  }
  const double inv = 1.0 / total;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(act_.size()); ++i) {
    act_[i] *= inv;
  }
}

CellCoord PoseCellNetwork::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < act_.size(); ++i) {
    if (act_[i] > act_[best]) best = i;
  }
  const int nx = cfg_.n_x;
  const int ny = cfg_.n_y;
  return {static_cast<int>(best % nx), static_cast<int>((best / nx) % ny),
          static_cast<int>(best / (static_cast<std::size_t>(nx) * ny))};
}

DecodedPose PoseCellNetwork::decode() const {
  const double total = total_activity();
  if (!(total > 0.0)) {
    throw std::logic_error("decode requires positive total activity");
  }
  const CellCoord m = argmax();
  const int dims[3] = {cfg_.n_x, cfg_.n_y, cfg_.n_theta};

  double vec[3][2] = {{0, 0}, {0, 0}, {0, 0}};  // per-axis (cos, sin) sums
  double window_mass = 0.0;
  for (int dt = -kDecodeRadius; dt <= kDecodeRadius; ++dt) {
    const int t = wrap(m.theta + dt, dims[2]);
    for (int dy = -kDecodeRadius; dy <= kDecodeRadius; ++dy) {
      const int y = wrap(m.y + dy, dims[1]);
      for (int dx = -kDecodeRadius; dx <= kDecodeRadius; ++dx) {
        const int x = wrap(m.x + dx, dims[0]);
        const double mass = act_[index(x, y, t)];
        window_mass += mass;
        const int coord[3] = {x, y, t};
        for (int a = 0; a < 3; ++a) {
          const double angle = 2.0 * kPi * coord[a] / dims[a];
          vec[a][0] += mass * std::cos(angle);
          vec[a][1] += mass * std::sin(angle);
        }
      }
    }
  }

  DecodedPose out;
  out.cx = circular_mean_index(vec[0][0], vec[0][1], dims[0]);
  out.cy = circular_mean_index(vec[1][0], vec[1][1], dims[1]);
  out.ctheta = circular_mean_index(vec[2][0], vec[2][1], dims[2]);
  out.pose.x = out.cx * cfg_.cell_size_xy;
  out.pose.y = out.cy * cfg_.cell_size_xy;
  out.pose.theta = normalize_angle(out.ctheta * cfg_.cell_size_theta());
  out.packet_mass = window_mass / total;
  return out;
}

}  // namespace cogslam
