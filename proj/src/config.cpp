#include "cogslam/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cogslam {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

class LineError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

double to_double(const std::string& v) {
  std::size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw LineError("expected a number, got '" + v + "'");
  }
  if (used != v.size()) {
    throw LineError("trailing characters after number in '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v) {
  const double d = to_double(v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw LineError("expected an integer, got '" + v + "'");
  }
  return i;
}

std::uint64_t to_seed(const std::string& v) {
  try {
    std::size_t used = 0;
    const std::uint64_t out = std::stoull(v, &used);
    if (used != v.size()) throw LineError("");
    return out;
  } catch (const std::exception&) {
    throw LineError("expected a non-negative integer seed, got '" + v + "'");
  }
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw LineError("expected true or false, got '" + v + "'");
}

double deg_to_rad(double deg) { return deg * kPi / 180.0; }

void apply(FullConfig& cfg, const std::string& key, const std::string& val) {
  SlamConfig& s = cfg.slam;
  if (key == "odometry.resolution") s.odometry.resolution = to_double(val);
  else if (key == "odometry.map_size") s.odometry.map_size = to_double(val);
  else if (key == "odometry.max_iterations") s.odometry.max_iterations = to_int(val);
  else if (key == "odometry.epsilon") s.odometry.epsilon = to_double(val);
  else if (key == "odometry.hit") s.odometry.hit = to_double(val);
  else if (key == "odometry.miss") s.odometry.miss = to_double(val);
  else if (key == "odometry.l_min") s.odometry.l_min = to_double(val);
  else if (key == "odometry.l_max") s.odometry.l_max = to_double(val);
  else if (key == "odometry.levels") s.odometry.levels = to_int(val);
  else if (key == "odometry.cond_threshold") s.odometry.cond_threshold = to_double(val);
  else if (key == "local_view.d_s") s.local_view.d_s = to_double(val);
  else if (key == "local_view.template_size") s.local_view.template_size = to_int(val);
  else if (key == "local_view.beta") s.local_view.beta = to_int(val);
  else if (key == "local_view.s_t") s.local_view.s_t = to_double(val);
  else if (key == "local_view.invalid_fill") s.local_view.invalid_fill = to_double(val);
  else if (key == "local_view.circular") s.local_view.circular = to_bool(val);
  else if (key == "local_view.probe_adjacent") s.local_view.probe_adjacent = to_bool(val);
  else if (key == "pose_cells.n_x") s.pose_cells.n_x = to_int(val);
  else if (key == "pose_cells.n_y") s.pose_cells.n_y = to_int(val);
  else if (key == "pose_cells.n_theta") s.pose_cells.n_theta = to_int(val);
  else if (key == "pose_cells.cell_size_xy") s.pose_cells.cell_size_xy = to_double(val);
  else if (key == "pose_cells.excite_sigma") s.pose_cells.excite_sigma = to_double(val);
  else if (key == "pose_cells.inhibit_sigma") s.pose_cells.inhibit_sigma = to_double(val);
  else if (key == "pose_cells.global_inhibition") s.pose_cells.global_inhibition = to_double(val);
  else if (key == "pose_cells.k_v") s.pose_cells.k_v = to_double(val);
  else if (key == "pose_cells.consec_threshold") s.pose_cells.consec_threshold = to_int(val);
  else if (key == "relax.a") s.relax.a = to_double(val);
  else if (key == "relax.iterations_per_step") s.relax.iterations_per_step = to_int(val);
  else if (key == "relax.use_printed_incoming_sign") s.relax.use_printed_incoming_sign = to_bool(val);
  else if (key == "relax.normalize_by_degree") s.relax.normalize_by_degree = to_bool(val);
  else if (key == "pipeline.closure_relax_iterations") s.closure_relax_iterations = to_int(val);
  else if (key == "pipeline.node_travel_m") s.node_travel_m = to_double(val);
  else if (key == "pipeline.node_travel_deg") s.node_travel_rad = deg_to_rad(to_double(val));
  else if (key == "pipeline.closure_pc_distance") s.closure_pc_distance = to_double(val);
  else if (key == "pipeline.seed") s.seed = to_seed(val);
  else if (key == "sim.beam_count") cfg.lidar.beam_count = to_int(val);
  else if (key == "sim.fov_deg") cfg.lidar.fov = deg_to_rad(to_double(val));
  else if (key == "sim.range_max") cfg.lidar.range_max = to_double(val);
  else if (key == "sim.noise_sigma") cfg.lidar.range_noise_sigma = to_double(val);
  else if (key == "sim.angle_min_deg") cfg.lidar.angle_min = deg_to_rad(to_double(val));
  else throw LineError("unknown configuration key '" + key + "'");
}

}  // namespace

FullConfig parse_config(std::istream& in) {
  FullConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    try {
      apply(cfg, key, val);
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return cfg;
}

FullConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file " + path);
  }
  return parse_config(in);
}

}  // namespace cogslam
