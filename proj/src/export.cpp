#include "rcis/export.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rcis {

namespace {

/* shortest decimal that round-trips to the same double */
std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("load_cells_csv: malformed number '" + s + "'");
  return v;
}

}  // namespace

ExportFormat export_format_from_string(const std::string& s) {
  if (s == "cells_csv") return ExportFormat::cells_csv;
  if (s == "cells_json") return ExportFormat::cells_json;
  if (s == "hull_csv") return ExportFormat::hull_csv;
  throw std::invalid_argument("unknown export format '" + s +
                              "' (expected cells_csv, cells_json or hull_csv)");
}

nlohmann::json covering_to_json(const Covering& c) {
  nlohmann::json j;
  j["root"]["lo"] = c.root().lo();
  j["root"]["hi"] = c.root().hi();
  j["depth"] = c.depth();
  j["splits"] = c.splits();
  auto cells = nlohmann::json::array();
  for (const CellId& id : c.cells()) cells.push_back(id.coords);
  j["cells"] = std::move(cells);
  return j;
}

Covering covering_from_json(const nlohmann::json& j) {
  const Box root(j.at("root").at("lo").get<std::vector<double>>(),
                 j.at("root").at("hi").get<std::vector<double>>());
  Covering grid = Covering::empty_grid(root, j.at("splits").get<std::vector<int>>());
  std::vector<CellId> cells;
  for (const auto& row : j.at("cells"))
    cells.push_back(CellId{row.get<std::vector<std::int64_t>>()});
  return grid.with_cells(std::move(cells));
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["mode"] = to_string(report.mode);
  j["termination"] = to_string(report.termination);
  j["iterations_completed"] = report.iterations_completed;
  j["graphs_per_iteration"] = report.graphs_per_iteration;
  j["eps"] = report.eps;
  j["total_seconds"] = report.total_seconds;
  auto records = nlohmann::json::array();
  for (const IterationRecord& r : report.records) {
    records.push_back({{"iteration", r.iteration},
                       {"cell_count", r.cell_count},
                       {"diameter", r.diameter},
                       {"edge_total", r.edge_total},
                       {"selection_seconds", r.selection_seconds},
                       {"wall_seconds", r.wall_seconds}});
  }
  j["records"] = std::move(records);
  j["pruned_cells"] = report.pruned_cells;
  j["final"] = covering_to_json(report.final_covering);
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.mode = j.at("mode").get<std::string>() == "inner" ? RunMode::inner
                                                           : RunMode::outer;
  const std::string term = j.at("termination").get<std::string>();
  if (term == "empty")
    report.termination = Termination::empty;
  else if (term == "fixed_point")
    report.termination = Termination::fixed_point;
  else if (term == "inclusion_met")
    report.termination = Termination::inclusion_met;
  else
    report.termination = Termination::budget_exhausted;
  report.iterations_completed = j.at("iterations_completed").get<int>();
  report.graphs_per_iteration = j.at("graphs_per_iteration").get<int>();
  report.eps = j.at("eps").get<double>();
  report.total_seconds = j.value("total_seconds", 0.0);
  for (const auto& r : j.at("records")) {
    IterationRecord rec;
    rec.iteration = r.at("iteration").get<int>();
    rec.cell_count = r.at("cell_count").get<std::size_t>();
    rec.diameter = r.at("diameter").get<double>();
    rec.edge_total = r.at("edge_total").get<std::size_t>();
    rec.selection_seconds = r.value("selection_seconds", 0.0);
    rec.wall_seconds = r.value("wall_seconds", 0.0);
    report.records.push_back(rec);
  }
  report.pruned_cells = j.value("pruned_cells", std::size_t{0});
  report.final_covering = covering_from_json(j.at("final"));
  return report;
}

std::string cells_csv(const Covering& c) {
  const int n = c.dim();
  std::ostringstream os;
  os << "depth";
  for (int i = 0; i < n; ++i) os << ",c" << (i + 1);
  for (int i = 0; i < n; ++i) os << ",lo" << (i + 1);
  for (int i = 0; i < n; ++i) os << ",hi" << (i + 1);
  os << '\n';
  for (const CellId& id : c.cells()) {
    const Box b = c.cell_bounds(id);
    os << c.depth();
    for (int i = 0; i < n; ++i) os << ',' << id.coords[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i) os << ',' << shortest(b.lo(i));
    for (int i = 0; i < n; ++i) os << ',' << shortest(b.hi(i));
    os << '\n';
  }
  return os.str();
}

std::string cells_json_text(const Covering& c) {
  return covering_to_json(c).dump(2) + "\n";
}

std::vector<std::vector<double>> convex_hull_2d(
    std::vector<std::vector<double>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  auto cross = [](const std::vector<double>& o, const std::vector<double>& a,
                  const std::vector<double>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  /* Andrew monotone chain; counterclockwise, collinear points dropped */
  std::vector<std::vector<double>> hull(2 * points.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  const std::size_t t = k + 1;
  for (std::size_t i = points.size() - 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::string hull_csv(const Covering& c) {
  if (c.dim() != 2)
    throw std::invalid_argument("hull_csv: convex hull export is 2-D only");
  std::vector<std::vector<double>> corners;
  for (const CellId& id : c.cells()) {
    const Box b = c.cell_bounds(id);
    for (auto& p : b.corners()) corners.push_back(std::move(p));
  }
  const auto hull = convex_hull_2d(std::move(corners));
  std::ostringstream os;
  os << "x,y\n";
  for (const auto& p : hull) os << shortest(p[0]) << ',' << shortest(p[1]) << '\n';
  return os.str();
}

void export_results(const Covering& c, ExportFormat format,
                    const std::filesystem::path& path) {
  switch (format) {
    case ExportFormat::cells_csv: write_text_file(path, cells_csv(c)); return;
    case ExportFormat::cells_json: write_text_file(path, cells_json_text(c)); return;
    case ExportFormat::hull_csv: write_text_file(path, hull_csv(c)); return;
  }
}

std::vector<Box> load_cells_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_cells_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_cells_csv: missing header");
  /* infer n from the header: 1 + 3n columns */
  const std::size_t cols = static_cast<std::size_t>(
      std::count(line.begin(), line.end(), ',') + 1);
  if (cols < 4 || (cols - 1) % 3 != 0)
    throw std::runtime_error("load_cells_csv: malformed header");
  const std::size_t n = (cols - 1) / 3;

  std::vector<Box> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != cols)
      throw std::runtime_error("load_cells_csv: malformed row");
    std::vector<double> lo, hi;
    for (std::size_t i = 0; i < n; ++i) lo.push_back(parse_double(fields[1 + n + i]));
    for (std::size_t i = 0; i < n; ++i) hi.push_back(parse_double(fields[1 + 2 * n + i]));
    out.emplace_back(std::move(lo), std::move(hi));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace rcis
