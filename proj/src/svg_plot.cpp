#include "cogslam/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cogslam {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kPad = 48.0;  // border kept free for axis labels

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Maps a data rectangle onto the padded canvas, y flipped so larger data
// values render higher.
struct Frame {
  double x0, x1, y0, y1;

  Frame(double xa, double xb, double ya, double yb)
      : x0(xa), x1(xb), y0(ya), y1(yb) {
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  }
  double px(double x) const {
    return kPad + (x - x0) / (x1 - x0) * (kWidth - 2 * kPad);
  }
  double py(double y) const {
    return kHeight - kPad - (y - y0) / (y1 - y0) * (kHeight - 2 * kPad);
  }
};

void open_svg(std::ostream& out, const char* title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\""
      << kWidth - 2 * kPad << "\" height=\"" << kHeight - 2 * kPad
      << "\" fill=\"none\" stroke=\"#444\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kPad - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
}

void axis_labels(std::ostream& out, const Frame& f, const char* x_name,
                 const char* y_name) {
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n"
      << "<text x=\"" << kPad << "\" y=\"" << kHeight - kPad + 16 << "\">"
      << num(f.x0) << "</text>\n"
      << "<text x=\"" << kWidth - kPad << "\" y=\"" << kHeight - kPad + 16
      << "\" text-anchor=\"end\">" << num(f.x1) << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - kPad + 32
      << "\" text-anchor=\"middle\">" << x_name << "</text>\n"
      << "<text x=\"" << kPad - 6 << "\" y=\"" << kHeight - kPad
      << "\" text-anchor=\"end\">" << num(f.y0) << "</text>\n"
      << "<text x=\"" << kPad - 6 << "\" y=\"" << kPad + 4
      << "\" text-anchor=\"end\">" << num(f.y1) << "</text>\n"
      << "<text x=\"" << kPad - 6 << "\" y=\"" << kHeight / 2
      << "\" text-anchor=\"end\">" << y_name << "</text>\n"
      << "</g>\n";
}

}  // namespace

void write_map_svg(std::ostream& out, const std::vector<MapNodeRow>& nodes,
                   const std::vector<MapEdgeRow>& edges) {
  if (nodes.empty()) {
    throw std::invalid_argument("map plot needs at least one node");
  }
  double x0 = nodes[0].x, x1 = nodes[0].x, y0 = nodes[0].y, y1 = nodes[0].y;
  for (const MapNodeRow& n : nodes) {
    x0 = std::min(x0, n.x);
    x1 = std::max(x1, n.x);
    y0 = std::min(y0, n.y);
    y1 = std::max(y1, n.y);
  }
  const double margin = std::max({(x1 - x0) * 0.05, (y1 - y0) * 0.05, 0.5});
  const Frame f(x0 - margin, x1 + margin, y0 - margin, y1 + margin);

  open_svg(out, "Cognitive map");
  out << "<g stroke=\"#b0b0b0\" stroke-width=\"1\">\n";
  for (const MapEdgeRow& e : edges) {
    if (e.from >= nodes.size() || e.to >= nodes.size()) {
      throw std::invalid_argument("edge references a missing node");
    }
    out << "<line x1=\"" << num(f.px(nodes[e.from].x)) << "\" y1=\""
        << num(f.py(nodes[e.from].y)) << "\" x2=\"" << num(f.px(nodes[e.to].x))
        << "\" y2=\"" << num(f.py(nodes[e.to].y)) << "\"/>\n";
  }
  out << "</g>\n<g fill=\"#1f6feb\">\n";
  for (const MapNodeRow& n : nodes) {
    out << "<circle cx=\"" << num(f.px(n.x)) << "\" cy=\"" << num(f.py(n.y))
        << "\" r=\"2.5\"/>\n";
  }
  out << "</g>\n";
  axis_labels(out, f, "x [m]", "y [m]");
  out << "</svg>\n";
}

void write_views_svg(std::ostream& out, const std::vector<ReportRow>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("view plot needs a non-empty report log");
  }
  double t1 = rows.front().t;
  double v1 = 0.0;
  for (const ReportRow& r : rows) {
    t1 = std::max(t1, r.t);
    v1 = std::max(v1, static_cast<double>(r.active_view));
  }
  const Frame f(rows.front().t, t1, 0.0, v1);

  open_svg(out, "Active view over time");
  out << "<g fill=\"#d9480f\">\n";
  for (const ReportRow& r : rows) {
    out << "<rect x=\"" << num(f.px(r.t) - 1.0) << "\" y=\""
        << num(f.py(static_cast<double>(r.active_view)) - 1.0)
        << "\" width=\"2\" height=\"2\"/>\n";
  }
  out << "</g>\n";
  axis_labels(out, f, "t [s]", "view");
  out << "</svg>\n";
}

void write_error_svg(std::ostream& out, const std::vector<ReportRow>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("error plot needs a non-empty report log");
  }
  double t1 = rows.front().t;
  double e1 = 0.0;
  bool any = false;
  for (const ReportRow& r : rows) {
    t1 = std::max(t1, r.t);
    if (std::isfinite(r.err)) {
      e1 = std::max(e1, r.err);
      any = true;
    }
  }
  const Frame f(rows.front().t, t1, 0.0, any ? e1 : 1.0);

  open_svg(out, "Translational error over time");
  out << "<polyline fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\" "
         "points=\"";
  for (const ReportRow& r : rows) {
    if (!std::isfinite(r.err)) continue;
    out << num(f.px(r.t)) << ',' << num(f.py(r.err)) << ' ';
  }
  out << "\"/>\n";
  axis_labels(out, f, "t [s]", "err [m]");
  out << "</svg>\n";
}

}  // namespace cogslam
