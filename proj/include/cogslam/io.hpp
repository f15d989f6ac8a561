#pragma once

#include "cogslam/experience_map.hpp"
#include "cogslam/local_map.hpp"
#include "cogslam/pipeline.hpp"
#include "cogslam/pose_cells.hpp"

#include <iosfwd>
#include <string>

namespace cogslam {

// All text formats are line records with space-separated fields. Floats are
// written with enough digits (%.17g) that a write/read round trip is exact,
// which is what lets a replay of a recorded log reproduce the original run
// bit for bit. Invalid ranges appear as "inf".

// `t angle_min angle_increment range_max r_0 ... r_{N-1}` per scan.
void write_scan_log(std::ostream& out, const std::vector<Scan>& scans);
std::vector<Scan> read_scan_log(std::istream& in);

// `t x y theta` per pose.
struct TruthLog {
  std::vector<double> t;
  std::vector<Pose> poses;
};
void write_truth_log(std::ostream& out, const TruthLog& truth);
TruthLog read_truth_log(std::istream& in);

// `t err_x err_y err node_count edge_count loop_closed active_view` per
// step. Error fields are "nan" when the run had no ground truth.
void write_report_log(std::ostream& out, const RunResult& result);
struct ReportRow {
  double t = 0.0;
  double err_x = 0.0;
  double err_y = 0.0;
  double err = 0.0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  bool loop_closed = false;
  std::size_t active_view = 0;
};
std::vector<ReportRow> read_report_log(std::istream& in);

// One line: `mean_err min_err max_err rmse n_steps n_nodes n_edges n_views`.
void write_summary(std::ostream& out, const RunResult& result,
                   std::size_t n_nodes, std::size_t n_edges,
                   std::size_t n_views);

// Nodes file: `id x y theta view_index`. Edges file:
// `from to dx dy dtheta dt`.
void write_map_files(std::ostream& nodes_out, std::ostream& edges_out,
                     const ExperienceMap& map);
struct MapNodeRow {
  std::size_t id = 0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  std::size_t view_index = 0;
};
struct MapEdgeRow {
  std::size_t from = 0;
  std::size_t to = 0;
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
  double dt = 0.0;
};
std::vector<MapNodeRow> read_map_nodes(std::istream& in);
std::vector<MapEdgeRow> read_map_edges(std::istream& in);

// `t active_index is_new s_best` per step.
void write_view_log(std::ostream& out, const RunResult& result);

// Occupancy grid as an ASCII graymap (0 = free, 255 = occupied) with a
// sidecar recording resolution, origin, and side length.
void write_map_pgm(std::ostream& pgm_out, std::ostream& meta_out,
                   const LocalMap& map);

// Flattened activity volume: dims on the first line, then one line per
// heading slice with x varying fastest.
void write_activity_snapshot(std::ostream& out, const PoseCellNetwork& net);

}  // namespace cogslam
