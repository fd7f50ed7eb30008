#include "gbflow/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gbflow/errors.hpp"
#include "gbflow/run_io.hpp"

namespace gbflow {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string word;
  while (ss >> word) out.push_back(word);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    if (!std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field \"" + key + "\": cannot parse number from \"" +
                      value + "\"");
  }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  KeyValueConfig kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key=value: \"" + s + "\"");
    std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + " has empty key");
    if (!section.empty()) key = section + "." + key;
    kv.values[key] = value;
  }
  return kv;
}

void KeyValueConfig::apply_override(const std::string& key, const std::string& value) {
  values[key] = value;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values.count(key) > 0;
}

std::string KeyValueConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing config field \"" + key + "\"");
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_double(key, get(key));
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : parse_double(key, it->second);
}

RunConfig RunConfig::from_key_values(const KeyValueConfig& kv) {
  RunConfig cfg;
  cfg.mode = kv.get_or("mode", cfg.mode);
  if (cfg.mode != "graph" && cfg.mode != "curve")
    throw ConfigError("field \"mode\": must be \"graph\" or \"curve\"");
  cfg.n = static_cast<int>(kv.get_double_or("n", cfg.n));
  cfg.m = static_cast<int>(kv.get_double_or("m", cfg.m));
  cfg.ic = kv.get_or("ic", cfg.ic);
  cfg.alpha0 = kv.get_double_or("alpha0", cfg.alpha0);
  cfg.sigma = kv.get_or("sigma", cfg.sigma);
  cfg.mu = kv.get_double_or("mu", cfg.mu);
  cfg.gamma = kv.get_double_or("gamma", cfg.gamma);
  cfg.dt = kv.get_or("dt", cfg.dt);
  if (cfg.dt != "auto") parse_double("dt", cfg.dt);
  cfg.t_end = kv.get_double_or("t_end", cfg.t_end);
  cfg.snapshot_every =
      static_cast<std::size_t>(kv.get_double_or("snapshot_every", 1));
  cfg.reparam_every =
      static_cast<std::size_t>(kv.get_double_or("reparam_every", 50));
  cfg.cfl_safety = kv.get_double_or("cfl_safety", cfg.cfl_safety);
  cfg.force_dt = kv.get_or("force_dt", "0") == "1";
  cfg.seed = static_cast<unsigned long long>(kv.get_double_or("seed", 1));
  cfg.out = kv.get_or("out", "");
  return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("mode", mode);
  out.emplace_back("n", std::to_string(n));
  out.emplace_back("m", std::to_string(m));
  out.emplace_back("ic", ic);
  out.emplace_back("alpha0", format_double(alpha0));
  out.emplace_back("sigma", sigma);
  out.emplace_back("mu", format_double(mu));
  out.emplace_back("gamma", format_double(gamma));
  out.emplace_back("dt", dt);
  out.emplace_back("t_end", format_double(t_end));
  out.emplace_back("snapshot_every", std::to_string(snapshot_every));
  out.emplace_back("reparam_every", std::to_string(reparam_every));
  out.emplace_back("cfl_safety", format_double(cfl_safety));
  out.emplace_back("force_dt", force_dt ? "1" : "0");
  out.emplace_back("seed", std::to_string(seed));
  return out;
}

Params RunConfig::params() const {
  Params p;
  p.mu = mu;
  p.gamma = gamma;
  p.t_end = t_end;
  p.cfl_safety = cfl_safety;
  p.force_dt = force_dt;
  if (dt == "auto") {
    // The per-step stable_dt cap takes over; dt only needs a finite ceiling.
    p.dt = 1e-3;
  } else {
    p.dt = parse_double("dt", dt);
  }
  return p;
}

SigmaModel RunConfig::sigma_model() const { return SigmaModel::from_name(sigma); }

std::vector<double> RunConfig::graph_initial(const Grid1D& grid) const {
  const std::vector<std::string> words = split_words(ic);
  if (words.empty()) throw ConfigError("field \"ic\": empty initial condition");
  std::vector<double> u(grid.n);
  if (words[0] == "constant") {
    if (words.size() != 2)
      throw ConfigError("field \"ic\": constant takes one value");
    const double c = parse_double("ic", words[1]);
    std::fill(u.begin(), u.end(), c);
    return u;
  }
  if (words[0] == "sine") {
    if (words.size() != 3 && words.size() != 4)
      throw ConfigError("field \"ic\": sine takes amplitude, wavenumber[, offset]");
    const double a = parse_double("ic", words[1]);
    const double k = parse_double("ic", words[2]);
    const double b = words.size() == 4 ? parse_double("ic", words[3]) : 0.0;
    for (int i = 0; i < grid.n; ++i)
      u[i] = a * std::sin(2.0 * std::numbers::pi * k * grid.x(i)) + b;
    return u;
  }
  // Anything else is a sample file: one u value per row, or x,u rows.
  const std::filesystem::path path(ic);
  if (!std::filesystem::exists(path))
    throw ConfigError("field \"ic\": unknown preset or missing file \"" + ic + "\"");
  const auto rows = read_csv(path);
  if (static_cast<int>(rows.size()) != grid.n)
    throw ConfigError("field \"ic\": sample file row count does not match n");
  for (int i = 0; i < grid.n; ++i) u[i] = rows[i].back();
  return u;
}

CurveState RunConfig::curve_initial() const {
  const std::vector<std::string> words = split_words(ic);
  if (words.empty()) throw ConfigError("field \"ic\": empty initial condition");
  if (words[0] == "circle") {
    if (words.size() != 2) throw ConfigError("field \"ic\": circle takes a radius");
    return make_circle(parse_double("ic", words[1]), m, {0.0, 0.0}, alpha0);
  }
  if (words[0] == "ellipse") {
    if (words.size() != 3)
      throw ConfigError("field \"ic\": ellipse takes two semi-axes");
    return make_ellipse(parse_double("ic", words[1]), parse_double("ic", words[2]),
                        m, {0.0, 0.0}, alpha0);
  }
  const std::filesystem::path path(ic);
  if (!std::filesystem::exists(path))
    throw ConfigError("field \"ic\": unknown preset or missing file \"" + ic + "\"");
  const auto rows = read_csv(path);
  std::vector<Vec2> pts;
  for (const auto& r : rows) {
    if (r.size() < 2) throw ConfigError("field \"ic\": curve file needs x,y rows");
    pts.push_back({r[0], r[1]});
  }
  return CurveState::make(std::move(pts), alpha0);
}

}  // namespace gbflow
