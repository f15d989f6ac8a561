#include "cogslam/config.hpp"
#include "cogslam/io.hpp"
#include "cogslam/pipeline.hpp"
#include "cogslam/sim.hpp"
#include "cogslam/svg_plot.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

struct RunOutputs {
  cogslam::RunResult result;
  std::size_t n_views = 0;
};

// Writes everything downstream of a finished pipeline run: report log,
// map export, summary, and the per-step view log.
void write_run_outputs(const fs::path& dir, const cogslam::RunResult& result,
                       const cogslam::SlamPipeline& pipeline) {
  auto report = open_output(dir / "report.log");
  cogslam::write_report_log(report, result);
  auto nodes = open_output(dir / "map_nodes.txt");
  auto edges = open_output(dir / "map_edges.txt");
  cogslam::write_map_files(nodes, edges, pipeline.map());
  auto summary = open_output(dir / "summary.txt");
  cogslam::write_summary(summary, result, pipeline.map().size(),
                         pipeline.map().edges().size(),
                         pipeline.views().view_count());
  auto views = open_output(dir / "view.log");
  cogslam::write_view_log(views, result);
}

void write_debug_dumps(const fs::path& dir,
                       const cogslam::SlamPipeline& pipeline, bool dump_grid,
                       bool dump_activity) {
  if (dump_grid) {
    auto pgm = open_output(dir / "local_grid.pgm");
    auto meta = open_output(dir / "local_grid.meta");
    cogslam::write_map_pgm(pgm, meta, pipeline.odometry().map());
  }
  if (dump_activity) {
    auto act = open_output(dir / "activity.txt");
    cogslam::write_activity_snapshot(act, pipeline.pose_cells());
  }
}

int cmd_simulate(const std::string& world_path,
                 const std::string& trajectory_path,
                 const std::string& config_path, const std::string& out_dir,
                 std::uint64_t* seed_override, bool dump_grid,
                 bool dump_activity) {
  cogslam::FullConfig cfg = cogslam::load_config_file(config_path);
  if (seed_override) cfg.slam.seed = *seed_override;

  auto world_in = open_input(world_path);
  const cogslam::World world = cogslam::load_world(world_in);
  auto traj_in = open_input(trajectory_path);
  const cogslam::TrajectoryScript script = cogslam::load_trajectory(traj_in);

  const std::vector<cogslam::SimFrame> frames =
      cogslam::run_trajectory(world, cfg.lidar, script, cfg.slam.seed);

  std::vector<cogslam::Scan> scans;
  cogslam::TruthLog truth;
  scans.reserve(frames.size());
  for (const cogslam::SimFrame& f : frames) {
    scans.push_back(f.scan);
    truth.t.push_back(f.t);
    truth.poses.push_back(f.truth_pose);
  }

  cogslam::SlamPipeline pipeline(cfg.slam);
  cogslam::RunResult result =
      cogslam::run_slam_with(pipeline, scans, &truth.poses);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  auto scan_out = open_output(dir / "scan.log");
  cogslam::write_scan_log(scan_out, scans);
  auto truth_out = open_output(dir / "truth.log");
  cogslam::write_truth_log(truth_out, truth);
  write_run_outputs(dir, result, pipeline);
  write_debug_dumps(dir, pipeline, dump_grid, dump_activity);

  std::cout << "simulated " << result.reports.size() << " scans, "
            << pipeline.map().size() << " experiences, mean error "
            << (result.stats.has_truth ? result.stats.mean_err : 0.0)
            << " m\n";
  return 0;
}

int cmd_replay(const std::string& scanlog_path, const std::string& truth_path,
               const std::string& config_path, const std::string& out_dir,
               bool dump_grid, bool dump_activity) {
  cogslam::FullConfig cfg = cogslam::load_config_file(config_path);

  auto scan_in = open_input(scanlog_path);
  const std::vector<cogslam::Scan> scans = cogslam::read_scan_log(scan_in);

  cogslam::TruthLog truth;
  const bool has_truth = !truth_path.empty();
  if (has_truth) {
    auto truth_in = open_input(truth_path);
    truth = cogslam::read_truth_log(truth_in);
    if (truth.poses.size() != scans.size()) {
      throw std::runtime_error("truth log has " +
                               std::to_string(truth.poses.size()) +
                               " poses for " + std::to_string(scans.size()) +
                               " scans");
    }
  }

  cogslam::SlamPipeline pipeline(cfg.slam);
  cogslam::RunResult result = cogslam::run_slam_with(
      pipeline, scans, has_truth ? &truth.poses : nullptr);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_run_outputs(dir, result, pipeline);
  write_debug_dumps(dir, pipeline, dump_grid, dump_activity);

  std::cout << "replayed " << result.reports.size() << " scans, "
            << pipeline.map().size() << " experiences\n";
  return 0;
}

int cmd_plot(const std::string& out_dir) {
  const fs::path dir(out_dir);
  auto report_in = open_input((dir / "report.log").string());
  const std::vector<cogslam::ReportRow> rows =
      cogslam::read_report_log(report_in);
  auto nodes_in = open_input((dir / "map_nodes.txt").string());
  const std::vector<cogslam::MapNodeRow> nodes =
      cogslam::read_map_nodes(nodes_in);
  auto edges_in = open_input((dir / "map_edges.txt").string());
  const std::vector<cogslam::MapEdgeRow> edges =
      cogslam::read_map_edges(edges_in);

  auto map_svg = open_output(dir / "map.svg");
  cogslam::write_map_svg(map_svg, nodes, edges);
  auto views_svg = open_output(dir / "views.svg");
  cogslam::write_views_svg(views_svg, rows);
  auto error_svg = open_output(dir / "error.svg");
  cogslam::write_error_svg(error_svg, rows);

  std::cout << "wrote map.svg, views.svg, error.svg in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biologically inspired 2D LiDAR SLAM harness"};
  app.require_subcommand(1);

  std::string world_path, trajectory_path, config_path, out_dir;
  std::string scanlog_path, truth_path;
  std::uint64_t seed = 0;
  bool dump_grid = false, dump_activity = false;

  CLI::App* simulate =
      app.add_subcommand("simulate", "raycast a scripted trajectory and run "
                                     "the pipeline on the result");
  simulate->add_option("--world", world_path, "world segment file")
      ->required();
  simulate->add_option("--trajectory", trajectory_path, "waypoint script")
      ->required();
  simulate->add_option("--config", config_path, "run configuration")
      ->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* seed_opt =
      simulate->add_option("--seed", seed, "simulator noise seed");
  simulate->add_flag("--dump-grid", dump_grid,
                     "also write the final occupancy grid");
  simulate->add_flag("--dump-activity", dump_activity,
                     "also write the final pose-cell activity");

  CLI::App* replay = app.add_subcommand(
      "replay", "run the pipeline on a recorded scan log");
  replay->add_option("--scanlog", scanlog_path, "recorded scan log")
      ->required();
  replay->add_option("--truth", truth_path, "optional ground-truth log");
  replay->add_option("--config", config_path, "run configuration")
      ->required();
  replay->add_option("--out", out_dir, "output directory")->required();
  replay->add_flag("--dump-grid", dump_grid,
                   "also write the final occupancy grid");
  replay->add_flag("--dump-activity", dump_activity,
                   "also write the final pose-cell activity");

  CLI::App* plot = app.add_subcommand(
      "plot", "render SVG plots from a finished run directory");
  plot->add_option("--out", out_dir, "run directory to plot")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      std::uint64_t* seed_ptr = seed_opt->count() > 0 ? &seed : nullptr;
      return cmd_simulate(world_path, trajectory_path, config_path, out_dir,
                          seed_ptr, dump_grid, dump_activity);
    }
    if (replay->parsed()) {
      return cmd_replay(scanlog_path, truth_path, config_path, out_dir,
                        dump_grid, dump_activity);
    }
    return cmd_plot(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
