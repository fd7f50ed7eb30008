#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gbflow/curve_solver.hpp"
#include "gbflow/graph_solver.hpp"
#include "gbflow/sigma.hpp"

namespace gbflow {

// Flat key=value store with optional [section] prefixes flattened to
// "section.key". Later assignments win, so flag overrides are just
// assignments applied after the file.
struct KeyValueConfig {
  std::map<std::string, std::string> values;

  static KeyValueConfig parse_file(const std::filesystem::path& path);
  void apply_override(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
};

struct RunConfig {
  std::string mode = "graph";  // "graph" or "curve"
  int n = 256;                 // graph grid points
  int m = 256;                 // curve vertices
  std::string ic = "constant 0";
  double alpha0 = 0.0;
  std::string sigma = "quadratic_shifted";
  double mu = 1.0;
  double gamma = 1.0;
  std::string dt = "auto";  // "auto" or a number
  double t_end = 1.0;
  std::size_t snapshot_every = 1;
  std::size_t reparam_every = 50;
  double cfl_safety = 0.5;
  bool force_dt = false;
  unsigned long long seed = 1;
  std::string out;  // run directory; default derived from GBFLOW_OUT_ROOT

  static RunConfig from_key_values(const KeyValueConfig& kv);
  std::vector<std::pair<std::string, std::string>> echo() const;

  Params params() const;
  SigmaModel sigma_model() const;
  // Initial data from the preset string ("constant c", "sine a k [b]",
  // or a CSV sample file path).
  std::vector<double> graph_initial(const Grid1D& grid) const;
  // "circle R", "ellipse a b", or a CSV file of x,y rows.
  CurveState curve_initial() const;
};

}  // namespace gbflow
