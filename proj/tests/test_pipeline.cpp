#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cogslam/pipeline.hpp"
#include "cogslam/sim.hpp"

#include <cmath>

using namespace cogslam;

namespace {

// An 8 x 6 room with an off-center pillar and a notch, rich enough that
// odometry and view matching both lock on.
World test_room() {
  std::vector<Segment> segs = box_segments(0.0, 0.0, 8.0, 6.0);
  for (const Segment& s : box_segments(4.6, 2.4, 5.6, 3.2))
    segs.push_back(s);
  segs.push_back({{0.0, 2.0}, {0.6, 2.0}});
  segs.push_back({{0.6, 2.0}, {0.6, 2.8}});
  segs.push_back({{0.6, 2.8}, {0.0, 2.8}});
  return World::from_segments(std::move(segs));
}

TrajectoryScript lap_script(int laps) {
  TrajectoryScript script;
  script.scan_rate = 5.0;
  const double corners[4][2] = {
      {1.2, 1.2}, {6.8, 1.2}, {6.8, 4.8}, {1.2, 4.8}};
  const double headings[4] = {0.0, kPi / 2.0, -kPi, -kPi / 2.0};
  double t = 0.0;
  script.waypoints.push_back({{1.2, 1.2, 0.0}, 0.0});
  for (int lap = 0; lap < laps; ++lap) {
    for (int leg = 0; leg < 4; ++leg) {
      const int next = (leg + 1) % 4;
      const double dist = std::hypot(corners[next][0] - corners[leg][0],
                                     corners[next][1] - corners[leg][1]);
      t += 1.5;  // turn in place toward the next corner
      script.waypoints.push_back(
          {{corners[leg][0], corners[leg][1], headings[leg]}, t});
      t += dist / 0.4;
      script.waypoints.push_back(
          {{corners[next][0], corners[next][1], headings[leg]}, t});
    }
  }
  return script;
}

SlamConfig fast_config() {
  SlamConfig cfg;
  cfg.odometry.levels = 2;
  cfg.odometry.map_size = 24.0;
  cfg.local_view.s_t = 0.3;
  cfg.local_view.d_s = 2.0;
  cfg.local_view.probe_adjacent = true;
  cfg.pose_cells.n_x = 48;  // 12 m at 0.25 m per cell, no wrap in the room
  cfg.pose_cells.n_y = 48;
  return cfg;
}

struct SimRun {
  std::vector<Scan> scans;
  std::vector<Pose> truth;
};

SimRun simulate_laps(int laps, std::uint64_t seed) {
  World world = test_room();
  LidarModel model;
  model.beam_count = 360;
  model.range_max = 30.0;
  model.range_noise_sigma = 0.01;
  SimRun run;
  for (const SimFrame& f :
       run_trajectory(world, model, lap_script(laps), seed)) {
    run.scans.push_back(f.scan);
    run.truth.push_back(f.truth_pose);
  }
  return run;
}

}  // namespace

TEST_CASE("two identical runs produce identical step reports") {
  SimRun sim = simulate_laps(1, 5);
  SlamConfig cfg = fast_config();

  RunResult a = run_slam(cfg, sim.scans, &sim.truth);
  RunResult b = run_slam(cfg, sim.scans, &sim.truth);

  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].map_pose_estimate.x == b.reports[i].map_pose_estimate.x);
    CHECK(a.reports[i].map_pose_estimate.y == b.reports[i].map_pose_estimate.y);
    CHECK(a.reports[i].active_view == b.reports[i].active_view);
    CHECK(a.reports[i].loop_closed == b.reports[i].loop_closed);
    CHECK(a.err[i] == b.err[i]);
  }
  CHECK(a.stats.mean_err == b.stats.mean_err);
}

TEST_CASE("a quiet straight drive still spawns nodes by travel distance") {
  World world = World::from_segments(test_room().segments);
  LidarModel model;
  model.beam_count = 360;
  model.range_max = 30.0;

  TrajectoryScript script;
  script.scan_rate = 5.0;
  script.waypoints.push_back({{1.0, 3.6, 0.0}, 0.0});
  script.waypoints.push_back({{7.0, 3.6, 0.0}, 15.0});

  std::vector<Scan> scans;
  for (const SimFrame& f : run_trajectory(world, model, script, 0))
    scans.push_back(f.scan);

  SlamConfig cfg = fast_config();
  SlamPipeline pipeline(cfg);
  RunResult r = run_slam_with(pipeline, scans, nullptr);

  // 6 m of travel at one node per 0.5 m, give or take view-driven extras.
  CHECK(pipeline.map().size() >= 12);
  CHECK(pipeline.map().size() <= 40);
  CHECK(r.reports.back().node_count == pipeline.map().size());
  CHECK(r.reports.back().edge_count == pipeline.map().edges().size());
  // A chain has exactly node_count - 1 edges; nothing here closes a loop.
  CHECK(pipeline.map().edges().size() == pipeline.map().size() - 1);
  for (const StepReport& rep : r.reports) CHECK_FALSE(rep.loop_closed);
}

TEST_CASE("revisiting a lap closes at least one loop onto older nodes") {
  SimRun sim = simulate_laps(3, 9);
  SlamConfig cfg = fast_config();
  SlamPipeline pipeline(cfg);
  RunResult r = run_slam_with(pipeline, sim.scans, &sim.truth);

  std::size_t closures = 0;
  bool onto_older = false;
  std::size_t nodes_at_first_closure = 0;
  for (const StepReport& rep : r.reports) {
    if (!rep.loop_closed) continue;
    if (closures == 0) nodes_at_first_closure = rep.node_count;
    ++closures;
    if (rep.closed_onto + 5 < rep.node_count) onto_older = true;
  }
  REQUIRE(closures >= 1);
  CHECK(onto_older);

  // Closing must form a cycle: more edges than a tree of this size.
  CHECK(pipeline.map().edges().size() >= pipeline.map().size());
  // The first closure can only happen once a fair stretch has been mapped.
  CHECK(nodes_at_first_closure >= 10);

  CHECK(r.stats.has_truth);
  CHECK(r.stats.mean_err < 0.3);
  CHECK(r.stats.max_err < 1.0);
}

TEST_CASE("the estimate is reported in the frame of the first truth pose") {
  SimRun sim = simulate_laps(1, 5);
  SlamConfig cfg = fast_config();
  RunResult r = run_slam(cfg, sim.scans, &sim.truth);

  REQUIRE(r.err.size() == sim.scans.size());
  // The first step defines the anchor, so its error is exactly zero.
  CHECK(r.err.front() == doctest::Approx(0.0));
  CHECK(r.stats.n_steps == sim.scans.size());
  CHECK(r.stats.min_err <= r.stats.mean_err);
  CHECK(r.stats.mean_err <= r.stats.max_err);
  CHECK(r.stats.rmse >= r.stats.mean_err);
}

TEST_CASE("running without truth leaves the error channels empty") {
  SimRun sim = simulate_laps(1, 5);
  SlamConfig cfg = fast_config();
  RunResult r = run_slam(cfg, sim.scans, nullptr);

  CHECK_FALSE(r.stats.has_truth);
  CHECK(r.err.empty());
  CHECK(r.err_x.empty());
  CHECK(r.reports.size() == sim.scans.size());
}

TEST_CASE("truth of the wrong length is rejected up front") {
  SimRun sim = simulate_laps(1, 5);
  std::vector<Pose> short_truth(sim.truth.begin(), sim.truth.end() - 3);
  SlamConfig cfg = fast_config();
  CHECK_THROWS_AS(run_slam(cfg, sim.scans, &short_truth),
                  std::invalid_argument);
}
