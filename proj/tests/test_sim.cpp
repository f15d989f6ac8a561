#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cogslam/sim.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace cogslam;

namespace {

// Closed-form beam length inside an axis-aligned box: the nearest positive
// distance at which the ray leaves [x0,x1] x [y0,y1]. Written independently
// of the segment-intersection code on purpose.
double box_ray_range(double px, double py, double phi, double x0, double y0,
                     double x1, double y1) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  double best = std::numeric_limits<double>::infinity();
  if (c > 1e-15) best = std::min(best, (x1 - px) / c);
  if (c < -1e-15) best = std::min(best, (x0 - px) / c);
  if (s > 1e-15) best = std::min(best, (y1 - py) / s);
  if (s < -1e-15) best = std::min(best, (y0 - py) / s);
  return best;
}

}  // namespace

TEST_CASE("raycast matches the closed-form solution in rectangular rooms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> side(4.0, 20.0);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  std::uniform_real_distribution<double> heading(-kPi, kPi);

  for (int trial = 0; trial < 20; ++trial) {
    const double w = side(rng);
    const double h = side(rng);
    World world = World::from_segments(box_segments(0.0, 0.0, w, h));
    LidarModel model;
    model.beam_count = 181;
    model.fov = 2.0 * kPi;
    model.range_max = 40.0;

    Pose pose{w * unit(rng), h * unit(rng), heading(rng)};
    Scan scan = raycast(world, pose, model, 0);
    REQUIRE(scan.beam_count() == 181);

    for (std::size_t i = 0; i < scan.beam_count(); ++i) {
      const double phi = pose.theta + scan.beam_angle(i);
      const double expected =
          box_ray_range(pose.x, pose.y, phi, 0.0, 0.0, w, h);
      REQUIRE(scan.beam_valid(i));
      CHECK(scan.ranges[i] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("beams that reach nothing within range_max are invalid") {
  World world = World::from_segments(box_segments(0.0, 0.0, 100.0, 8.0));
  LidarModel model;
  model.beam_count = 4;  // along +x, +y, -x, -y
  model.range_max = 30.0;

  Pose pose{2.0, 4.0, 0.0};
  Scan scan = raycast(world, pose, model, 0);

  CHECK_FALSE(scan.beam_valid(0));                           // 98 m to go
  CHECK(scan.ranges[1] == doctest::Approx(4.0));             // top wall
  CHECK(scan.ranges[2] == doctest::Approx(2.0));             // left wall
  CHECK(scan.ranges[3] == doctest::Approx(4.0));             // bottom wall
}

TEST_CASE("range noise is seeded and zero sigma means exact ranges") {
  World world = World::from_segments(box_segments(0.0, 0.0, 6.0, 6.0));
  LidarModel noisy;
  noisy.beam_count = 90;
  noisy.range_noise_sigma = 0.05;

  Pose pose{2.0, 3.0, 0.3};
  Scan a = raycast(world, pose, noisy, 42);
  Scan b = raycast(world, pose, noisy, 42);
  Scan c = raycast(world, pose, noisy, 43);

  CHECK(a.ranges == b.ranges);
  CHECK(a.ranges != c.ranges);

  LidarModel clean = noisy;
  clean.range_noise_sigma = 0.0;
  Scan exact_1 = raycast(world, pose, clean, 42);
  Scan exact_2 = raycast(world, pose, clean, 99);
  CHECK(exact_1.ranges == exact_2.ranges);

  // Even heavy noise must not push a return out of the legal interval.
  LidarModel wild = noisy;
  wild.range_noise_sigma = 5.0;
  Scan s = raycast(world, pose, wild, 7);
  CHECK_NOTHROW(s.validate());
  for (std::size_t i = 0; i < s.beam_count(); ++i) {
    if (!s.beam_valid(i)) continue;
    CHECK(s.ranges[i] > 0.0);
    CHECK(s.ranges[i] <= wild.range_max);
  }
}

TEST_CASE("pose interpolation is linear in position and shortest-arc in heading") {
  TrajectoryScript script;
  script.scan_rate = 5.0;
  script.waypoints.push_back({{0.0, 0.0, 0.0}, 0.0});
  script.waypoints.push_back({{2.0, 1.0, 0.0}, 2.0});
  script.waypoints.push_back({{2.0, 1.0, kPi / 2.0}, 3.0});

  Pose mid = interpolate_pose(script, 1.0);
  CHECK(mid.x == doctest::Approx(1.0));
  CHECK(mid.y == doctest::Approx(0.5));
  CHECK(mid.theta == doctest::Approx(0.0));

  Pose turning = interpolate_pose(script, 2.5);
  CHECK(turning.x == doctest::Approx(2.0));
  CHECK(turning.theta == doctest::Approx(kPi / 4.0));

  // Clamped outside the scripted interval.
  CHECK(interpolate_pose(script, -1.0).x == doctest::Approx(0.0));
  CHECK(interpolate_pose(script, 99.0).theta == doctest::Approx(kPi / 2.0));
}

TEST_CASE("heading interpolation crosses the wraparound seam the short way") {
  TrajectoryScript script;
  script.waypoints.push_back({{0.0, 0.0, 170.0 * kPi / 180.0}, 0.0});
  script.waypoints.push_back({{0.0, 0.0, -170.0 * kPi / 180.0}, 2.0});

  // Halfway should sit on the seam, not at the long-way midpoint 0.
  Pose mid = interpolate_pose(script, 1.0);
  CHECK(std::abs(mid.theta) == doctest::Approx(kPi));

  Pose early = interpolate_pose(script, 0.5);
  CHECK(early.theta == doctest::Approx(175.0 * kPi / 180.0));
}

TEST_CASE("run_trajectory emits frames at the scan rate with both endpoints") {
  World world = World::from_segments(box_segments(0.0, 0.0, 10.0, 10.0));
  LidarModel model;
  model.beam_count = 16;

  TrajectoryScript script;
  script.scan_rate = 5.0;
  script.waypoints.push_back({{2.0, 2.0, 0.0}, 0.0});
  script.waypoints.push_back({{8.0, 2.0, 0.0}, 3.0});

  auto frames = run_trajectory(world, model, script, 1);
  REQUIRE(frames.size() == 16);  // 0.0 .. 3.0 at 0.2 s
  CHECK(frames.front().t == doctest::Approx(0.0));
  CHECK(frames.back().t == doctest::Approx(3.0));
  CHECK(frames.back().truth_pose.x == doctest::Approx(8.0));
  for (const SimFrame& f : frames) {
    Pose p = interpolate_pose(script, f.t);
    CHECK(f.truth_pose.x == doctest::Approx(p.x));
    CHECK(f.truth_pose.y == doctest::Approx(p.y));
    CHECK(f.scan.timestamp == doctest::Approx(f.t));
  }
}

TEST_CASE("run_trajectory rejects scripts that leave the world") {
  World world = World::from_segments(box_segments(0.0, 0.0, 10.0, 10.0));
  LidarModel model;

  TrajectoryScript script;
  script.waypoints.push_back({{5.0, 5.0, 0.0}, 0.0});
  script.waypoints.push_back({{15.0, 5.0, 0.0}, 5.0});

  CHECK_THROWS_WITH_AS(run_trajectory(world, model, script, 0),
                       doctest::Contains("leaves world bounds"),
                       std::invalid_argument);
}

TEST_CASE("world files parse segments and reject malformed lines") {
  std::istringstream good(
      "# comment line\n"
      "0 0 4 0\n"
      "4 0 4 3\n"
      "\n"
      "4 3 0 3\n"
      "0 3 0 0\n");
  World world = load_world(good);
  CHECK(world.segments.size() == 4);
  CHECK(world.bounds.min.x == doctest::Approx(0.0));
  CHECK(world.bounds.max.y == doctest::Approx(3.0));

  std::istringstream bad("0 0 4\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_world(bad)),
                       doctest::Contains("line 1"), std::runtime_error);

  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(static_cast<void>(load_world(empty)), std::runtime_error);
}

TEST_CASE("world validation rejects degenerate segments") {
  CHECK_THROWS_AS(World::from_segments({{{1.0, 1.0}, {1.0, 1.0}}}),
                  std::invalid_argument);
  std::vector<Segment> nan_wall = {
      {{0.0, 0.0}, {std::numeric_limits<double>::quiet_NaN(), 1.0}}};
  CHECK_THROWS_AS(World::from_segments(nan_wall), std::invalid_argument);
}

TEST_CASE("trajectory files need a scan rate and clean waypoint lines") {
  std::istringstream good(
      "# patrol\n"
      "scan_rate 5\n"
      "0 1 1 0\n"
      "10 5 1 0\n");
  TrajectoryScript script = load_trajectory(good);
  CHECK(script.scan_rate == doctest::Approx(5.0));
  REQUIRE(script.waypoints.size() == 2);
  CHECK(script.waypoints[1].pose.x == doctest::Approx(5.0));

  std::istringstream no_rate("0 1 1 0\n10 5 1 0\n");
  CHECK_THROWS_AS(static_cast<void>(load_trajectory(no_rate)),
                  std::runtime_error);

  std::istringstream bad_line("scan_rate 5\n0 1 1\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_trajectory(bad_line)),
                       doctest::Contains("line 2"), std::runtime_error);
}
