#include "gbflow/run_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gbflow/errors.hpp"
#include "gbflow/version.hpp"

namespace gbflow {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::filesystem::path RunArtifacts::snapshot(std::size_t step) const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%08zu.csv", step);
  return dir / buf;
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create run directory " + dir.string());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

constexpr const char* kDiagnosticsHeader =
    "t,alpha,E,length,sup_v,sup_u,h1,h2,h3,sup_kappa";

void write_diag_line(std::ofstream& out, const DiagnosticsRow& r) {
  out << format_double(r.t) << ',' << format_double(r.alpha) << ','
      << format_double(r.energy) << ',' << format_double(r.length) << ','
      << format_double(r.sup_v) << ',' << format_double(r.sup_u) << ','
      << format_double(r.h1) << ',' << format_double(r.h2) << ','
      << format_double(r.h3) << ',' << format_double(r.sup_kappa) << '\n';
}

}  // namespace

void write_graph_run(const RunArtifacts& artifacts, const Trajectory& traj) {
  ensure_dir(artifacts.dir);
  {
    std::ofstream out = open_out(artifacts.diagnostics());
    out << kDiagnosticsHeader << '\n';
    for (const DiagnosticsRow& r : traj.rows) write_diag_line(out, r);
  }
  for (const GraphSnapshot& snap : traj.snapshots) {
    std::ofstream out = open_out(artifacts.snapshot(snap.step));
    out << "x,u\n";
    out << "# t=" << format_double(snap.t) << " alpha=" << format_double(snap.alpha)
        << '\n';
    for (std::size_t i = 0; i < snap.u.size(); ++i)
      out << format_double(traj.grid.x(static_cast<int>(i))) << ','
          << format_double(snap.u[i]) << '\n';
  }
}

void write_curve_run(const RunArtifacts& artifacts, const CurveTrajectory& traj,
                     const ExtinctionReport& report) {
  ensure_dir(artifacts.dir);
  {
    std::ofstream out = open_out(artifacts.diagnostics());
    out << kDiagnosticsHeader << '\n';
    for (const CurveDiagnosticsRow& r : traj.rows) {
      DiagnosticsRow row;
      row.t = r.t;
      row.alpha = r.alpha;
      row.energy = r.energy;
      row.length = r.perimeter;
      row.sup_v = r.r_origin;
      row.sup_u = r.r_centroid;
      row.sup_kappa = r.sup_kappa;
      write_diag_line(out, row);
    }
  }
  for (const CurveSnapshot& snap : traj.snapshots) {
    std::ofstream out = open_out(artifacts.snapshot(snap.step));
    out << "x,y\n";
    out << "# t=" << format_double(snap.t) << " alpha=" << format_double(snap.alpha)
        << '\n';
    for (const Vec2& p : snap.pts)
      out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
  {
    json j;
    j["status"] = to_string(report.status);
    j["time"] = report.time;
    j["final_perimeter"] = report.final_perimeter;
    j["extinction_threshold"] = report.extinction_threshold;
    json radius = json::array();
    for (const CurveDiagnosticsRow& r : traj.rows)
      radius.push_back({r.t, r.r_origin});
    j["radius_series"] = radius;
    std::ofstream out = open_out(artifacts.extinction());
    out << j.dump(2) << '\n';
  }
}

void write_manifest(const RunArtifacts& artifacts,
                    const std::vector<std::pair<std::string, std::string>>& config,
                    double wall_time_s) {
  ensure_dir(artifacts.dir);
  json j;
  j["version"] = kVersion;
  j["wall_time_s"] = wall_time_s;
  json cfg = json::object();
  for (const auto& [key, value] : config) cfg[key] = value;
  j["config"] = cfg;
  std::ofstream out = open_out(artifacts.manifest());
  out << j.dump(2) << '\n';
}

void write_check_reports(const std::filesystem::path& path,
                         const std::vector<CheckReport>& reports) {
  json out = json::array();
  for (const CheckReport& r : reports) {
    json j;
    j["name"] = r.name;
    j["applicable"] = r.applicable;
    j["passed"] = r.passed;
    j["worst_violation"] = r.worst_violation;
    j["tolerance"] = r.tolerance;
    j["location"] = r.location;
    j["note"] = r.note;
    out.push_back(j);
  }
  std::ofstream file = open_out(path);
  file << out.dump(2) << '\n';
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!have_header) {
      // First non-comment line is the header.
      have_header = true;
      if (header) *header = fields;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(f, &used));
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw IoError("malformed CSV value \"" + f + "\" at " + path.string() +
                      ":" + std::to_string(lineno));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SavedRun read_run(const std::filesystem::path& dir) {
  SavedRun run;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("missing manifest.json in " + dir.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
    }
    for (const auto& [key, value] : j.at("config").items())
      run.config.emplace_back(key, value.get<std::string>());
  }

  std::string mode = "graph";
  for (const auto& [key, value] : run.config)
    if (key == "mode") mode = value;
  run.is_graph = (mode == "graph");

  {
    std::vector<std::string> header;
    const auto rows = read_csv(dir / "diagnostics.csv", &header);
    for (const auto& r : rows) {
      if (r.size() != 10)
        throw IoError("diagnostics.csv row with wrong column count in " +
                      dir.string());
      DiagnosticsRow row;
      row.t = r[0];
      row.alpha = r[1];
      row.energy = r[2];
      row.length = r[3];
      row.sup_v = r[4];
      row.sup_u = r[5];
      row.h1 = r[6];
      row.h2 = r[7];
      row.h3 = r[8];
      row.sup_kappa = r[9];
      run.rows.push_back(row);
    }
  }

  std::vector<fs::path> snaps;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0) snaps.push_back(entry.path());
  }
  std::sort(snaps.begin(), snaps.end());
  for (const fs::path& p : snaps) {
    const std::string stem = p.stem().string();
    const std::size_t step = std::stoul(stem.substr(stem.find('_') + 1));
    // The alpha/t metadata rides in a comment line.
    double t = 0.0, alpha = 0.0;
    {
      std::ifstream in(p);
      std::string line;
      std::getline(in, line);  // header
      std::getline(in, line);  // "# t=... alpha=..."
      if (line.rfind("# t=", 0) == 0) {
        std::stringstream ss(line.substr(4));
        ss >> t;
        const auto pos = line.find("alpha=");
        if (pos != std::string::npos) alpha = std::stod(line.substr(pos + 6));
      }
    }
    const auto data = read_csv(p);
    if (run.is_graph) {
      GraphSnapshot snap;
      snap.step = step;
      snap.t = t;
      snap.alpha = alpha;
      for (const auto& r : data) snap.u.push_back(r.at(1));
      run.graph_snapshots.push_back(std::move(snap));
    } else {
      CurveSnapshot snap;
      snap.step = step;
      snap.t = t;
      snap.alpha = alpha;
      for (const auto& r : data) snap.pts.push_back({r.at(0), r.at(1)});
      run.curve_snapshots.push_back(std::move(snap));
    }
  }
  if (run.rows.empty()) throw IoError("run directory has no diagnostics rows");
  return run;
}

}  // namespace gbflow
