#include "cogslam/io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cogslam {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& token) {
  std::size_t used = 0;
  double out;
  try {
    out = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("expected a number, got '" + token + "'");
  }
  if (used != token.size()) {
    throw std::runtime_error("malformed number '" + token + "'");
  }
  return out;
}

std::size_t parse_index(const std::string& token) {
  const double d = parse_double(token);
  if (d < 0 || d != std::floor(d)) {
    throw std::runtime_error("expected a non-negative integer, got '" +
                             token + "'");
  }
  return static_cast<std::size_t>(d);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

// Runs `parse` once per non-empty line, rethrowing with the line number so
// callers can report exactly where a log is broken.
template <typename F>
void for_each_record(std::istream& in, const char* what, F parse) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    try {
      parse(tokens);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(what) + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

void write_scan_log(std::ostream& out, const std::vector<Scan>& scans) {
  for (const Scan& scan : scans) {
    out << fmt(scan.timestamp) << ' ' << fmt(scan.angle_min) << ' '
        << fmt(scan.angle_increment) << ' ' << fmt(scan.range_max);
    for (double r : scan.ranges) out << ' ' << fmt(r);
    out << '\n';
  }
}

std::vector<Scan> read_scan_log(std::istream& in) {
  std::vector<Scan> scans;
  for_each_record(in, "scan log", [&](const std::vector<std::string>& tok) {
    if (tok.size() < 6) {
      throw std::runtime_error("scan record needs at least 2 beams");
    }
    Scan scan;
    scan.timestamp = parse_double(tok[0]);
    scan.angle_min = parse_double(tok[1]);
    scan.angle_increment = parse_double(tok[2]);
    scan.range_max = parse_double(tok[3]);
    scan.ranges.reserve(tok.size() - 4);
    for (std::size_t i = 4; i < tok.size(); ++i) {
      scan.ranges.push_back(parse_double(tok[i]));
    }
    scan.validate();
    scans.push_back(std::move(scan));
  });
  return scans;
}

void write_truth_log(std::ostream& out, const TruthLog& truth) {
  for (std::size_t i = 0; i < truth.poses.size(); ++i) {
    out << fmt(truth.t[i]) << ' ' << fmt(truth.poses[i].x) << ' '
        << fmt(truth.poses[i].y) << ' ' << fmt(truth.poses[i].theta) << '\n';
  }
}

TruthLog read_truth_log(std::istream& in) {
  TruthLog truth;
  for_each_record(in, "truth log", [&](const std::vector<std::string>& tok) {
    if (tok.size() != 4) {
      throw std::runtime_error("expected 't x y theta'");
    }
    truth.t.push_back(parse_double(tok[0]));
    truth.poses.push_back(Pose{parse_double(tok[1]), parse_double(tok[2]),
                               parse_double(tok[3])});
  });
  return truth;
}

void write_report_log(std::ostream& out, const RunResult& result) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const StepReport& r = result.reports[i];
    const bool has_err = i < result.err.size();
    out << fmt(r.t) << ' ' << fmt(has_err ? result.err_x[i] : nan) << ' '
        << fmt(has_err ? result.err_y[i] : nan) << ' '
        << fmt(has_err ? result.err[i] : nan) << ' ' << r.node_count << ' '
        << r.edge_count << ' ' << (r.loop_closed ? 1 : 0) << ' '
        << r.active_view << '\n';
  }
}

std::vector<ReportRow> read_report_log(std::istream& in) {
  std::vector<ReportRow> rows;
  for_each_record(in, "report log", [&](const std::vector<std::string>& tok) {
    if (tok.size() != 8) {
      throw std::runtime_error("expected 8 fields");
    }
    ReportRow row;
    row.t = parse_double(tok[0]);
    row.err_x = parse_double(tok[1]);
    row.err_y = parse_double(tok[2]);
    row.err = parse_double(tok[3]);
    row.node_count = parse_index(tok[4]);
    row.edge_count = parse_index(tok[5]);
    row.loop_closed = parse_index(tok[6]) != 0;
    row.active_view = parse_index(tok[7]);
    rows.push_back(row);
  });
  return rows;
}

void write_summary(std::ostream& out, const RunResult& result,
                   std::size_t n_nodes, std::size_t n_edges,
                   std::size_t n_views) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const RunStats& s = result.stats;
  out << fmt(s.has_truth ? s.mean_err : nan) << ' '
      << fmt(s.has_truth ? s.min_err : nan) << ' '
      << fmt(s.has_truth ? s.max_err : nan) << ' '
      << fmt(s.has_truth ? s.rmse : nan) << ' ' << s.n_steps << ' '
      << n_nodes << ' ' << n_edges << ' ' << n_views << '\n';
}

void write_map_files(std::ostream& nodes_out, std::ostream& edges_out,
                     const ExperienceMap& map) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Experience& n = map.node(i);
    nodes_out << n.id << ' ' << fmt(n.pose.x) << ' ' << fmt(n.pose.y) << ' '
              << fmt(n.pose.theta) << ' ' << n.view_index << '\n';
  }
  for (const Transition& e : map.edges()) {
    edges_out << e.from << ' ' << e.to << ' ' << fmt(e.delta.dx) << ' '
              << fmt(e.delta.dy) << ' ' << fmt(e.delta.dtheta) << ' '
              << fmt(e.dt) << '\n';
  }
}

std::vector<MapNodeRow> read_map_nodes(std::istream& in) {
  std::vector<MapNodeRow> rows;
  for_each_record(in, "map nodes", [&](const std::vector<std::string>& tok) {
    if (tok.size() != 5) {
      throw std::runtime_error("expected 'id x y theta view_index'");
    }
    rows.push_back(MapNodeRow{parse_index(tok[0]), parse_double(tok[1]),
                              parse_double(tok[2]), parse_double(tok[3]),
                              parse_index(tok[4])});
  });
  return rows;
}

std::vector<MapEdgeRow> read_map_edges(std::istream& in) {
  std::vector<MapEdgeRow> rows;
  for_each_record(in, "map edges", [&](const std::vector<std::string>& tok) {
    if (tok.size() != 6) {
      throw std::runtime_error("expected 'from to dx dy dtheta dt'");
    }
    rows.push_back(MapEdgeRow{parse_index(tok[0]), parse_index(tok[1]),
                              parse_double(tok[2]), parse_double(tok[3]),
                              parse_double(tok[4]), parse_double(tok[5])});
  });
  return rows;
}

void write_view_log(std::ostream& out, const RunResult& result) {
  for (const StepReport& r : result.reports) {
    out << fmt(r.t) << ' ' << r.active_view << ' ' << (r.is_new_view ? 1 : 0)
        << ' ' << fmt(r.view_best_s) << '\n';
  }
}

void write_map_pgm(std::ostream& pgm_out, std::ostream& meta_out,
                   const LocalMap& map) {
  const int n = map.size();
  pgm_out << "P2\n" << n << ' ' << n << "\n255\n";
  for (int j = n - 1; j >= 0; --j) {  // top image row is the largest y
    for (int i = 0; i < n; ++i) {
      const int v = static_cast<int>(std::lround(255.0 * map.probability(i, j)));
      pgm_out << v << (i + 1 == n ? '\n' : ' ');
    }
  }
  meta_out << "resolution " << fmt(map.resolution()) << '\n'
           << "origin " << fmt(map.origin().x) << ' ' << fmt(map.origin().y)
           << '\n'
           << "size " << n << '\n';
}

void write_activity_snapshot(std::ostream& out, const PoseCellNetwork& net) {
  const PoseCellConfig& cfg = net.config();
  out << cfg.n_x << ' ' << cfg.n_y << ' ' << cfg.n_theta << '\n';
  const std::vector<double>& act = net.activity();
  const std::size_t slice = static_cast<std::size_t>(cfg.n_x) * cfg.n_y;
  for (int t = 0; t < cfg.n_theta; ++t) {
    for (std::size_t i = 0; i < slice; ++i) {
      out << fmt(act[t * slice + i]) << (i + 1 == slice ? '\n' : ' ');
    }
  }
}

}  // namespace cogslam
