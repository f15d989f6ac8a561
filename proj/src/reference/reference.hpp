#pragma once

#include "cogslam/experience_map.hpp"
#include "cogslam/odometry.hpp"
#include "cogslam/pose_cells.hpp"
#include "cogslam/sim.hpp"

namespace cogslam::reference {

// Serial counterparts of the parallel kernels. They favor the most direct
// formulation over speed: tests compare them against the production kernels
// and the benchmark measures the gap. Activity vectors use the same layout
// as PoseCellNetwork: index (x, y, t) = (t * n_y + y) * n_x + x.

// Plain per-beam loop; bitwise-identical output to the parallel raycast.
Scan raycast_serial(const World& world, const Pose& pose,
                    const LidarModel& model, std::uint64_t rng_seed);

// Single-loop accumulation of the match normal equations.
MatchAccum accumulate_match_terms_serial(const ContinuousMapView& view,
                                         const PointSet& points,
                                         const Pose& pose);

// One attractor update computed with a dense 3D product kernel (no
// separable passes): excitation minus inhibition minus the uniform term,
// clamp, reseed-if-empty, normalize.
std::vector<double> attractor_step_dense(const std::vector<double>& act,
                                         const PoseCellConfig& cfg);

// Trilinear toroidal shift in scatter form: every source cell distributes
// its mass over the 2x2x2 target cube.
std::vector<double> path_integrate_dense(const std::vector<double>& act,
                                         const PoseCellConfig& cfg,
                                         const PoseDelta& delta);

// Jacobi relaxation over an explicit pose/edge list, one node at a time.
void relax_serial(std::vector<Pose>& poses,
                  const std::vector<Transition>& edges,
                  const RelaxConfig& cfg, int iterations);

}  // namespace cogslam::reference
