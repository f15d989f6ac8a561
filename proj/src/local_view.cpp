#include "cogslam/local_view.hpp"

#include <algorithm>
#include <stdexcept>

namespace cogslam {

void LocalViewConfig::validate() const {
  if (!std::isfinite(d_s)) {
    throw std::invalid_argument("local_view.d_s must be finite");
  }
  if (template_size < 8) {
    throw std::invalid_argument("local_view.template_size must be >= 8");
  }
  if (beta < 0) {
    throw std::invalid_argument("local_view.beta must be >= 0");
  }
  if (!(s_t > 0.0)) {
    throw std::invalid_argument("local_view.s_t must be positive");
  }
  if (!(invalid_fill >= 0.0) || !std::isfinite(invalid_fill)) {
    throw std::invalid_argument("local_view.invalid_fill must be >= 0");
  }
}

namespace {

double filled_range(const Scan& scan, std::size_t i, double invalid_fill) {
  return scan.beam_valid(i) ? scan.ranges[i] : invalid_fill;
}

}  // namespace

std::int64_t coarse_feature(const Scan& scan, double d_s,
                            double invalid_fill) {
  double sum = 0.0;
  for (std::size_t i = 0; i < scan.beam_count(); ++i) {
    sum += filled_range(scan, i, invalid_fill);
  }
  return static_cast<std::int64_t>(std::floor(std::pow(10.0, -d_s) * sum));
}

ViewTemplate build_template(const Scan& scan, int template_size,
                            double invalid_fill) {
  const std::size_t n = scan.beam_count();
  ViewTemplate out(static_cast<std::size_t>(template_size));
  // Sample the 1-based sequence d_1..d_N at n/M, 2n/M, ..., n; fractional
  // positions interpolate between the two neighboring ranges.
  const double stride = static_cast<double>(n) / template_size;
  for (int i = 1; i <= template_size; ++i) {
    const double pos = stride * i;
    double lo = std::floor(pos);
    const double frac = pos - lo;
    lo = std::clamp(lo, 1.0, static_cast<double>(n));
    const double hi = std::clamp(std::ceil(pos), 1.0, static_cast<double>(n));
    const double d_lo =
        filled_range(scan, static_cast<std::size_t>(lo) - 1, invalid_fill);
    const double d_hi =
        filled_range(scan, static_cast<std::size_t>(hi) - 1, invalid_fill);
    out[i - 1] = d_lo + frac * (d_hi - d_lo);
  }
  return out;
}

namespace {

// One shifted comparison. Pairs are visited from a start offset chosen so
// that the same physical pairs appear in the same order no matter which
// template is passed first; squares of negated differences are bitwise
// equal, so similarity stays exactly symmetric.
double shifted_mean_sq(const ViewTemplate& a, const ViewTemplate& b, int j) {
  const int m = static_cast<int>(a.size());
  const int start = j >= 0 ? 0 : (-j) % m;
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const int q = (start + k) % m;
    const double d = a[(q + j % m + m) % m] - b[q];
    sum += d * d;
  }
  return sum / m;
}

double truncated_mean_sq(const ViewTemplate& a, const ViewTemplate& b, int j) {
  const int m = static_cast<int>(a.size());
  const int lo = std::max(0, -j);
  const int hi = m - 1 - std::max(0, j);
  if (hi < lo) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double d = a[i + j] - b[i];
    sum += d * d;
  }
  return sum / (hi - lo + 1);
}

}  // namespace

double similarity(const ViewTemplate& a, const ViewTemplate& b, int beta,
                  bool circular) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("templates must share a nonzero length");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int j = -beta; j <= beta; ++j) {
    const double s =
        circular ? shifted_mean_sq(a, b, j) : truncated_mean_sq(a, b, j);
    best = std::min(best, s);
  }
  return best;
}

LocalViewCells::LocalViewCells(const LocalViewConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
}

ViewMatch LocalViewCells::process(const Scan& scan) {
  const std::int64_t h = coarse_feature(scan, cfg_.d_s, cfg_.invalid_fill);
  const ViewTemplate tmpl =
      build_template(scan, cfg_.template_size, cfg_.invalid_fill);

  activity_.assign(views_.size(), 0.0);

  std::vector<std::size_t> candidates;
  const std::int64_t probe = cfg_.probe_adjacent ? 1 : 0;
  for (std::int64_t key = h - probe; key <= h + probe; ++key) {
    auto [it, end] = by_coarse_.equal_range(key);
    for (; it != end; ++it) candidates.push_back(it->second);
  }
  std::sort(candidates.begin(), candidates.end());

  ViewMatch out;
  out.best_s = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i : candidates) {
    const double s = similarity(tmpl, views_[i].tmpl, cfg_.beta,
                                cfg_.circular);
    activity_[i] = 1.0 - std::min(cfg_.s_t, s) / cfg_.s_t;
    if (s < out.best_s) {  // strict: earliest view wins ties
      out.best_s = s;
      best_index = i;
    }
  }

  if (out.best_s < cfg_.s_t) {
    out.active_index = best_index;
    out.is_new = false;
    return out;
  }
  // Nothing above threshold: learn the scan as a new view, fully active.
  const std::size_t index = views_.size();
  views_.push_back(LocalView{h, tmpl});
  by_coarse_.emplace(h, index);
  activity_.push_back(1.0);
  out.active_index = index;
  out.is_new = true;
  return out;
}

}  // namespace cogslam
