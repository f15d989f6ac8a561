#pragma once

#include "cogslam/geometry.hpp"

#include <cstdint>
#include <unordered_map>

namespace cogslam {

// Downsampled range template, one full sensor revolution per template.
using ViewTemplate = std::vector<double>;

struct LocalViewConfig {
  double d_s = 1.0;          // coarse-hash downscale exponent
  int template_size = 72;    // values per template
  int beta = 4;              // shift tolerance, template-index units
  double s_t = 0.9;          // similarity acceptance threshold, meters^2
  double invalid_fill = 30.0;  // range substituted for invalid beams
  bool circular = true;      // wrap shifted templates (full-revolution FOV)
  bool probe_adjacent = false;  // also consider coarse buckets h-1 and h+1

  void validate() const;
};

struct LocalView {
  std::int64_t coarse = 0;
  ViewTemplate tmpl;
};

// Integer prefilter hash: the scaled, floored sum of all ranges.
std::int64_t coarse_feature(const Scan& scan, double d_s, double invalid_fill);

// Linear-interpolation downsample of the scan's ranges to template_size
// values, sampling the 1-based range sequence at (N / template_size) * i.
ViewTemplate build_template(const Scan& scan, int template_size,
                            double invalid_fill);

// Minimum mean squared difference over integer shifts in [-beta, beta].
// Circular mode wraps shifted indices; otherwise the mean runs over the
// overlapping index range only. Symmetric in its template arguments.
double similarity(const ViewTemplate& a, const ViewTemplate& b, int beta,
                  bool circular);

struct ViewMatch {
  std::size_t active_index = 0;
  bool is_new = false;
  double best_s = 0.0;  // best refined similarity; +inf when no candidate
};

// Append-only set of learned views with per-step activity. Each process call
// recomputes the whole activity vector: candidates sharing the scan's coarse
// feature get 1 - min(s_t, s)/s_t, everything else 0. When no candidate
// clears the threshold the scan is learned as a new view.
class LocalViewCells {
 public:
  explicit LocalViewCells(const LocalViewConfig& cfg);

  const LocalViewConfig& config() const { return cfg_; }
  std::size_t view_count() const { return views_.size(); }
  const LocalView& view(std::size_t i) const { return views_.at(i); }
  const std::vector<double>& activity() const { return activity_; }

  ViewMatch process(const Scan& scan);

 private:
  LocalViewConfig cfg_;
  std::vector<LocalView> views_;
  std::vector<double> activity_;
  std::unordered_multimap<std::int64_t, std::size_t> by_coarse_;
};

}  // namespace cogslam
