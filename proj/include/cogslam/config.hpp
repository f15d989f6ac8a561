#pragma once

#include "cogslam/pipeline.hpp"
#include "cogslam/sim.hpp"

#include <iosfwd>
#include <string>

namespace cogslam {

// Everything a run needs: pipeline parameters plus the sensor model the
// simulator should emulate.
struct FullConfig {
  SlamConfig slam;
  LidarModel lidar;
};

// Plain-text `section.key = value` format, `#` comments, booleans as
// true/false. Angles are written in degrees in the file (keys ending in
// _deg) and converted here. Unknown keys are errors so typos cannot
// silently fall back to defaults.
FullConfig parse_config(std::istream& in);

FullConfig load_config_file(const std::string& path);

}  // namespace cogslam
