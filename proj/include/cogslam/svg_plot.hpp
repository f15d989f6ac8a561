#pragma once

#include "cogslam/io.hpp"

#include <iosfwd>

namespace cogslam {

// Static plots of a finished run. Each writer throws on empty input so the
// command layer can turn that into a clean nonzero exit.

// Cognitive map: one circle per node, one line per edge, world axes in
// meters with y up.
void write_map_svg(std::ostream& out, const std::vector<MapNodeRow>& nodes,
                   const std::vector<MapEdgeRow>& edges);

// Active view index against time, one marker per step.
void write_views_svg(std::ostream& out, const std::vector<ReportRow>& rows);

// Translational error against time; steps without ground truth are skipped.
void write_error_svg(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace cogslam
