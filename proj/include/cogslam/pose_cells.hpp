#pragma once

#include "cogslam/geometry.hpp"

#include <algorithm>
#include <unordered_map>

namespace cogslam {

struct PoseCellConfig {
  int n_x = 40;
  int n_y = 40;
  int n_theta = 36;
  double cell_size_xy = 0.25;   // meters per cell
  double excite_sigma = 1.0;    // cells
  double inhibit_sigma = 2.0;   // cells
  double global_inhibition = 2e-5;
  double k_v = 0.1;             // calibration injection rate
  int consec_threshold = 3;     // matched steps required before injection

  // The heading axis covers one full turn, so its cell size is derived.
  double cell_size_theta() const { return 2.0 * kPi / n_theta; }
  double k_x() const { return 1.0 / cell_size_xy; }
  double k_y() const { return 1.0 / cell_size_xy; }
  double k_theta() const { return 1.0 / cell_size_theta(); }

  void validate() const;
};

struct CellCoord {
  int x = 0;
  int y = 0;
  int theta = 0;
};

struct DecodedPose {
  Pose pose;
  double packet_mass = 0.0;  // window activity / total activity
  // Continuous cell-unit coordinates of the packet center, in [0, n_axis).
  double cx = 0.0;
  double cy = 0.0;
  double ctheta = 0.0;
};

// Where each learned view was observed: view index -> the pose-cell
// coordinate that was maximally active when the view was learned.
class ViewToPoseLinks {
 public:
  void learn(std::size_t view_index, const CellCoord& coord);
  bool has(std::size_t view_index) const {
    return links_.count(view_index) != 0;
  }
  const CellCoord& coord(std::size_t view_index) const {
    return links_.at(view_index);
  }
  std::size_t size() const { return links_.size(); }

 private:
  std::unordered_map<std::size_t, CellCoord> links_;
};

// Continuous attractor network over a wrapped (x, y, heading) grid. Local
// Gaussian excitation keeps a single activity packet stable, wider Gaussian
// plus uniform inhibition suppress competitors, and the packet is moved by
// odometry shifts and pulled by view-cell injections.
class PoseCellNetwork {
 public:
  explicit PoseCellNetwork(const PoseCellConfig& cfg);

  const PoseCellConfig& config() const { return cfg_; }
  const std::vector<double>& activity() const { return act_; }
  double cell(int x, int y, int t) const { return act_[index(x, y, t)]; }
  double total_activity() const;

  // Test and visualization hooks for preparing specific activity states.
  void clear() { std::fill(act_.begin(), act_.end(), 0.0); }
  void set_cell(int x, int y, int t, double v) { act_[index(x, y, t)] = v; }

  // Shifts the whole activity volume by the scaled delta: whole cells as a
  // toroidal index roll, the fractional remainder as trilinear weights over
  // the neighboring 2x2x2 cube. Conserves total activity.
  void path_integrate(const PoseDelta& delta);

  // Adds k_v * V_i at every linked coordinate, but only once at least
  // consec_threshold consecutive calls carried positive activity (the gate
  // suppresses relocation on isolated spurious matches). A call with no
  // positive linked activity resets the streak. Returns whether any mass
  // was injected.
  bool inject_view(const std::vector<double>& view_activity,
                   const ViewToPoseLinks& links);
  void reset_match_streak() { match_streak_ = 0; }
  int match_streak() const { return match_streak_; }

  // One attractor update: add the excitation convolution, subtract the
  // inhibition convolution and the uniform term, clamp at zero, normalize
  // to unit total. An all-zero result reseeds the previous maximum cell.
  void attractor_step();

  CellCoord argmax() const;

  // Activity-weighted circular mean per axis over a 5-cell window around
  // the maximum, converted to metric units (cell i is centered at
  // i * cell_size).
  DecodedPose decode() const;

 private:
  std::size_t index(int x, int y, int t) const {
    return (static_cast<std::size_t>(t) * cfg_.n_y + y) * cfg_.n_x + x;
  }

  PoseCellConfig cfg_;
  std::vector<double> act_;
  std::vector<double> excite_kernel_;
  std::vector<double> inhibit_kernel_;
  int match_streak_ = 0;
};

}  // namespace cogslam
