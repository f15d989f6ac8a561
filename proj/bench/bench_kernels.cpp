// Times the parallel kernels against their serial reference versions on
// fixed workloads. Build with -DCMAKE_BUILD_TYPE=Release for honest numbers.

#include "cogslam/experience_map.hpp"
#include "cogslam/local_map.hpp"
#include "cogslam/odometry.hpp"
#include "cogslam/pose_cells.hpp"
#include "cogslam/sim.hpp"
#include "reference/reference.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up caches before the timed reps
  const auto start = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const std::chrono::duration<double, std::milli> elapsed =
      Clock::now() - start;
  return elapsed.count() / reps;
}

void report(const char* name, double parallel_ms, double serial_ms) {
  std::printf("%-24s parallel %9.3f ms   serial %9.3f ms   speedup %5.2fx\n",
              name, parallel_ms, serial_ms, serial_ms / parallel_ms);
}

cogslam::World bench_world() {
  std::vector<cogslam::Segment> segs = cogslam::box_segments(0, 0, 16.8, 12.6);
  const std::vector<cogslam::Segment> block_a =
      cogslam::box_segments(2.8, 2.8, 7.0, 9.8);
  const std::vector<cogslam::Segment> block_b =
      cogslam::box_segments(9.8, 2.8, 14.0, 9.8);
  segs.insert(segs.end(), block_a.begin(), block_a.end());
  segs.insert(segs.end(), block_b.begin(), block_b.end());
  return cogslam::World::from_segments(segs);
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 20;
  if (argc > 1) {
    reps = std::atoi(argv[1]);
    if (reps < 1) {
      std::fprintf(stderr, "usage: %s [reps]\n", argv[0]);
      return 1;
    }
  }
  std::printf("averaging over %d reps per kernel\n\n", reps);

  const cogslam::World world = bench_world();
  cogslam::LidarModel lidar;
  lidar.beam_count = 720;
  lidar.range_noise_sigma = 0.01;
  const cogslam::Pose sensor_pose{1.4, 1.4, 0.4};

  report("raycast",
         time_ms(reps,
                 [&] { cogslam::raycast(world, sensor_pose, lidar, 7); }),
         time_ms(reps, [&] {
           cogslam::reference::raycast_serial(world, sensor_pose, lidar, 7);
         }));

  // Match-term accumulation against a grid built from one clean scan.
  cogslam::LidarModel clean = lidar;
  clean.range_noise_sigma = 0.0;
  const cogslam::Scan scan = cogslam::raycast(world, sensor_pose, clean, 0);
  cogslam::LocalMap grid(0.05, 40.0, {-20.0, -20.0}, -4.0, 4.0);
  for (int i = 0; i < 10; ++i) {
    grid.integrate_scan(scan, sensor_pose, 0.9, -0.4);
  }
  const cogslam::ContinuousMapView view(grid);
  const cogslam::PointSet points = cogslam::scan_to_points(scan);

  report("match_terms",
         time_ms(reps,
                 [&] {
                   cogslam::accumulate_match_terms(view, points, sensor_pose);
                 }),
         time_ms(reps, [&] {
           cogslam::reference::accumulate_match_terms_serial(view, points,
                                                             sensor_pose);
         }));

  // Attractor update on a grid salted with a few hundred random impulses.
  cogslam::PoseCellConfig pc_cfg;
  cogslam::PoseCellNetwork network(pc_cfg);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> dx(0, pc_cfg.n_x - 1);
  std::uniform_int_distribution<int> dy(0, pc_cfg.n_y - 1);
  std::uniform_int_distribution<int> dt(0, pc_cfg.n_theta - 1);
  std::uniform_real_distribution<double> dv(0.0, 1.0);
  for (int i = 0; i < 400; ++i) {
    network.set_cell(dx(rng), dy(rng), dt(rng), dv(rng));
  }
  const std::vector<double> act = network.activity();

  report("attractor_step",
         time_ms(reps,
                 [&] {
                   cogslam::PoseCellNetwork n(pc_cfg);
                   n.clear();
                   for (int t = 0; t < pc_cfg.n_theta; ++t)
                     for (int y = 0; y < pc_cfg.n_y; ++y)
                       for (int x = 0; x < pc_cfg.n_x; ++x)
                         n.set_cell(x, y, t,
                                    act[(static_cast<std::size_t>(t) *
                                             pc_cfg.n_y + y) * pc_cfg.n_x + x]);
                   n.attractor_step();
                 }),
         time_ms(reps, [&] {
           cogslam::reference::attractor_step_dense(act, pc_cfg);
         }));

  // Relaxation over a long loop with a closing gap.
  std::vector<cogslam::Pose> poses;
  std::vector<cogslam::Transition> edges;
  const int n_nodes = 400;
  for (int i = 0; i < n_nodes; ++i) {
    poses.push_back({static_cast<double>(i), 0.0, 0.0});
    if (i > 0) {
      edges.push_back({static_cast<std::size_t>(i - 1),
                       static_cast<std::size_t>(i),
                       {1.0, 0.0, 0.0},
                       1.0});
    }
  }
  edges.push_back({static_cast<std::size_t>(n_nodes - 1), 0,
                   {1.0, 0.5, 0.0}, 1.0});
  cogslam::ExperienceMap em;
  em.create_experience({0, 0, 0}, 0);
  for (int i = 1; i < n_nodes; ++i) {
    em.integrate_odometry({1.0, 0.0, 0.0}, 1.0);
    em.create_experience({0, 0, 0}, static_cast<std::size_t>(i));
  }
  em.integrate_odometry({1.0, 0.5, 0.0}, 1.0);
  em.close_loop(0);
  cogslam::RelaxConfig relax_cfg;

  report("relax_100it",
         time_ms(reps, [&] { cogslam::ExperienceMap(em).relax(relax_cfg, 100); }),
         time_ms(reps, [&] {
           std::vector<cogslam::Pose> p = poses;
           cogslam::reference::relax_serial(p, edges, relax_cfg, 100);
         }));

  return 0;
}
