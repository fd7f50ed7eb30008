#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gbflow/curve_solver.hpp"
#include "gbflow/diagnostics.hpp"
#include "gbflow/graph_solver.hpp"

namespace gbflow {

// 17-significant-digit decimal formatting; reparsing reproduces the double
// bit for bit, which is what the byte-stable diagnostics contract needs.
std::string format_double(double value);

struct RunArtifacts {
  std::filesystem::path dir;
  std::filesystem::path manifest() const { return dir / "manifest.json"; }
  std::filesystem::path diagnostics() const { return dir / "diagnostics.csv"; }
  std::filesystem::path snapshot(std::size_t step) const;
  std::filesystem::path extinction() const { return dir / "extinction_report.json"; }
};

// diagnostics.csv columns, identical for both modes:
//   t,alpha,E,length,sup_v,sup_u,h1,h2,h3,sup_kappa
// For curve runs sup_v is the origin-centered enclosure radius max|p|,
// sup_u is max|p - centroid|, and the Sobolev columns are zero.
void write_graph_run(const RunArtifacts& artifacts, const Trajectory& traj);
void write_curve_run(const RunArtifacts& artifacts, const CurveTrajectory& traj,
                     const ExtinctionReport& report);

// Manifest: config echo + library version + wall time, JSON.
void write_manifest(const RunArtifacts& artifacts,
                    const std::vector<std::pair<std::string, std::string>>& config,
                    double wall_time_s);

// Flat JSON serialization of a batch of check reports.
void write_check_reports(const std::filesystem::path& path,
                         const std::vector<CheckReport>& reports);

struct SavedRun {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<DiagnosticsRow> rows;                  // from diagnostics.csv
  std::vector<GraphSnapshot> graph_snapshots;        // graph mode
  std::vector<CurveSnapshot> curve_snapshots;        // curve mode
  bool is_graph = true;
};

// Reconstructs a run from its directory alone (manifest round-trip).
SavedRun read_run(const std::filesystem::path& dir);

// Raw CSV helpers.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header = nullptr);

}  // namespace gbflow
