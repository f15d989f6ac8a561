#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cogslam/odometry.hpp"
#include "cogslam/sim.hpp"
#include "reference/reference.hpp"

#include <cmath>
#include <random>

using namespace cogslam;

namespace {

// A room with enough corners to pin down all three pose components: a box
// with one angled wall and an interior pillar, centered on the origin,
// rotated so wall directions vary across trials.
World cluttered_room(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> side(5.0, 9.0);
  std::uniform_real_distribution<double> spin(-kPi, kPi);
  const double w = side(rng);
  const double h = side(rng);
  const double rot = spin(rng);

  std::vector<Segment> segs;
  auto add = [&](double x1, double y1, double x2, double y2) {
    const double c = std::cos(rot), s = std::sin(rot);
    segs.push_back({{c * x1 - s * y1, s * x1 + c * y1},
                    {c * x2 - s * y2, s * x2 + c * y2}});
  };
  add(-w, -h, w, -h);
  add(w, -h, w, h * 0.6);
  add(w, h * 0.6, w * 0.7, h);  // chamfered corner
  add(w * 0.7, h, -w, h);
  add(-w, h, -w, -h);
  add(1.5, 1.0, 2.5, 1.0);
  add(2.5, 1.0, 2.5, 2.0);
  add(2.5, 2.0, 1.5, 2.0);
  add(1.5, 2.0, 1.5, 1.0);
  return World::from_segments(std::move(segs));
}

Scan scan_at(const World& world, const Pose& pose) {
  LidarModel model;
  model.beam_count = 360;
  model.range_max = 30.0;
  return raycast(world, pose, model, 0);
}

}  // namespace

TEST_CASE("match_scan recovers small pose offsets in random rooms") {
  OdometryConfig cfg;
  cfg.levels = 3;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dpos(-0.2, 0.2);
  std::uniform_real_distribution<double> dang(-5.0 * kPi / 180.0,
                                              5.0 * kPi / 180.0);

  int recovered = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    World world = cluttered_room(rng);
    Odometry odo(cfg);
    odo.integrate_scan(scan_at(world, {0.0, 0.0, 0.0}), {0.0, 0.0, 0.0});

    // The sensor moves by delta; the matcher should report that motion.
    const Pose moved{dpos(rng), dpos(rng), dang(rng)};
    MatchResult m = odo.match_scan(scan_at(world, moved));

    REQUIRE_FALSE(m.low_confidence);
    const double terr = std::hypot(m.delta.dx - moved.x, m.delta.dy - moved.y);
    const double aerr = std::abs(normalize_angle(m.delta.dtheta - moved.theta));
    if (terr < 0.02 && aerr < 0.5 * kPi / 180.0) ++recovered;
  }
  // An occasional basin miss on an awkward room is tolerated, mirroring the
  // 95% bar the full hundred-scene sweep is held to.
  CHECK(recovered >= trials - 1);
}

TEST_CASE("matching the exact mapped scan yields a near-zero correction") {
  std::mt19937_64 rng(7);
  World world = cluttered_room(rng);
  Odometry odo(OdometryConfig{});
  Scan scan = scan_at(world, {0.0, 0.0, 0.0});
  odo.integrate_scan(scan, {0.0, 0.0, 0.0});

  MatchResult m = odo.match_scan(scan);
  CHECK(std::hypot(m.delta.dx, m.delta.dy) < 5e-3);
  CHECK(std::abs(m.delta.dtheta) < 1e-3);
}

TEST_CASE("match_scan before any integration is an error") {
  Odometry odo(OdometryConfig{});
  Scan scan;
  scan.angle_increment = 2.0 * kPi / 8.0;
  scan.range_max = 10.0;
  scan.ranges.assign(8, 2.0);
  CHECK_THROWS_AS(static_cast<void>(odo.match_scan(scan)), std::logic_error);
}

TEST_CASE("the first step seeds the map and reports zero motion") {
  std::mt19937_64 rng(9);
  World world = cluttered_room(rng);
  Odometry odo(OdometryConfig{});

  OdometryStepResult r = odo.step(scan_at(world, {0.0, 0.0, 0.0}));
  CHECK(r.delta.dx == 0.0);
  CHECK(r.delta.dy == 0.0);
  CHECK(r.delta.dtheta == 0.0);
  CHECK(odo.pose().x == 0.0);
  CHECK(odo.pose().y == 0.0);
}

TEST_CASE("stepping through a short drive tracks the true trajectory") {
  std::mt19937_64 rng(31);
  World world = cluttered_room(rng);
  OdometryConfig cfg;
  cfg.levels = 2;
  Odometry odo(cfg);

  Pose truth{0.0, 0.0, 0.0};
  odo.step(scan_at(world, truth));
  for (int k = 0; k < 30; ++k) {
    truth = compose(truth, {0.05, 0.0, 2.0 * kPi / 180.0});
    odo.step(scan_at(world, truth));
  }
  CHECK(std::hypot(odo.pose().x - truth.x, odo.pose().y - truth.y) < 0.05);
  CHECK(std::abs(normalize_angle(odo.pose().theta - truth.theta)) <
        1.0 * kPi / 180.0);
}

TEST_CASE("robot-frame and map-frame deltas describe the same motion") {
  std::mt19937_64 rng(13);
  World world = cluttered_room(rng);
  OdometryConfig cfg;
  cfg.levels = 2;
  Odometry odo(cfg);

  Pose truth{0.0, 0.0, 0.0};
  odo.step(scan_at(world, truth));
  // Turn away from the map frame first so the two deltas actually differ.
  for (int k = 0; k < 12; ++k) {
    truth = compose(truth, {0.04, 0.01, 8.0 * kPi / 180.0});
    Pose before = odo.pose();
    OdometryStepResult r = odo.step(scan_at(world, truth));

    Pose via_robot = compose(before, r.delta);
    CHECK(via_robot.x == doctest::Approx(odo.pose().x).epsilon(1e-12));
    CHECK(via_robot.y == doctest::Approx(odo.pose().y).epsilon(1e-12));

    CHECK(before.x + r.delta_map.dx == doctest::Approx(odo.pose().x));
    CHECK(before.y + r.delta_map.dy == doctest::Approx(odo.pose().y));
    CHECK(normalize_angle(before.theta + r.delta_map.dtheta) ==
          doctest::Approx(odo.pose().theta));
  }
}

TEST_CASE("a scan with no map support is flagged instead of guessed") {
  std::mt19937_64 rng(53);
  World world = cluttered_room(rng);
  Odometry odo(OdometryConfig{});
  odo.step(scan_at(world, {0.0, 0.0, 0.0}));
  Pose before = odo.pose();

  // Every return 25 m out lands beyond the 20 m map half-extent, so the
  // objective is flat and no update direction exists.
  Scan lost;
  lost.angle_increment = 2.0 * kPi / 180.0;
  lost.range_max = 30.0;
  lost.ranges.assign(180, 25.0);
  OdometryStepResult r = odo.step(lost);

  CHECK(r.low_confidence);
  CHECK(r.delta.dx == 0.0);
  CHECK(r.delta.dy == 0.0);
  CHECK(r.delta.dtheta == 0.0);
  CHECK(odo.pose().x == before.x);
  CHECK(odo.pose().y == before.y);
}

TEST_CASE("parallel and serial match-term accumulation agree bit for bit") {
  std::mt19937_64 rng(41);
  World world = cluttered_room(rng);
  OdometryConfig cfg;
  Odometry odo(cfg);
  odo.integrate_scan(scan_at(world, {0.0, 0.0, 0.0}), {0.0, 0.0, 0.0});
  ContinuousMapView view(odo.map(0));

  std::uniform_real_distribution<double> dpos(-0.3, 0.3);
  for (int k = 0; k < 5; ++k) {
    const Pose probe{dpos(rng), dpos(rng), dpos(rng)};
    PointSet points = scan_to_points(scan_at(world, probe));

    MatchAccum par = accumulate_match_terms(view, points, probe);
    MatchAccum ser =
        reference::accumulate_match_terms_serial(view, points, probe);

    CHECK(par.score == ser.score);
    for (int i = 0; i < 3; ++i) {
      CHECK(par.g[i] == ser.g[i]);
      for (int j = 0; j < 3; ++j) CHECK(par.h[i][j] == ser.h[i][j]);
    }
  }
}

TEST_CASE("parallel and serial raycast agree bit for bit") {
  std::mt19937_64 rng(43);
  World world = cluttered_room(rng);
  LidarModel model;
  model.beam_count = 271;
  model.range_noise_sigma = 0.02;

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Pose pose{0.3 * static_cast<double>(seed), 0.1, 0.4};
    Scan par = raycast(world, pose, model, seed);
    Scan ser = reference::raycast_serial(world, pose, model, seed);
    REQUIRE(par.beam_count() == ser.beam_count());
    for (std::size_t i = 0; i < par.beam_count(); ++i)
      CHECK(par.ranges[i] == ser.ranges[i]);
  }
}

TEST_CASE("pyramid levels expose coarsened copies of the same map") {
  OdometryConfig cfg;
  cfg.levels = 3;
  Odometry odo(cfg);
  CHECK(odo.levels() == 3);
  CHECK(odo.map(0).resolution() == doctest::Approx(cfg.resolution));
  CHECK(odo.map(1).resolution() == doctest::Approx(cfg.resolution * 2.0));
  CHECK(odo.map(2).resolution() == doctest::Approx(cfg.resolution * 4.0));

  std::mt19937_64 rng(47);
  World world = cluttered_room(rng);
  odo.integrate_scan(scan_at(world, {0.0, 0.0, 0.0}), {0.0, 0.0, 0.0});
  // Every level received the scan: some occupied mass exists in each.
  for (int level = 0; level < 3; ++level) {
    const LocalMap& m = odo.map(level);
    double peak = 0.0;
    for (int j = 0; j < m.size(); ++j)
      for (int i = 0; i < m.size(); ++i)
        peak = std::max(peak, m.log_odds(i, j));
    CHECK(peak > 0.0);
  }
}
