#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbflow/commands.hpp"
#include "gbflow/config.hpp"
#include "gbflow/errors.hpp"
#include "gbflow/run_io.hpp"

using namespace gbflow;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gbflow_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig example_config(const fs::path& out) {
  KeyValueConfig kv;
  kv.values = {{"mode", "graph"},     {"n", "64"},       {"ic", "constant 0"},
               {"alpha0", "1"},       {"gamma", "1"},    {"dt", "5e-5"},
               {"t_end", "0.5"},      {"sigma", "quadratic_shifted"},
               {"out", out.string()}};
  return RunConfig::from_key_values(kv);
}

}  // namespace

TEST_CASE("key=value config parsing with sections and overrides") {
  const fs::path file = fs::temp_directory_path() / "gbflow_test.cfg";
  {
    std::ofstream out(file);
    out << "# comment\n"
        << "mode = graph\n"
        << "n = 128\n"
        << "[solver]\n"
        << "tol = 1e-6\n"
        << "ic = sine 0.5 2\n";
  }
  KeyValueConfig kv = KeyValueConfig::parse_file(file);
  CHECK(kv.get("mode") == "graph");
  CHECK(kv.get("solver.tol") == "1e-6");
  CHECK(kv.get("solver.ic") == "sine 0.5 2");
  kv.apply_override("n", "256");
  CHECK(kv.get_double("n") == 256.0);

  {
    std::ofstream out(file);
    out << "just a broken line\n";
  }
  CHECK_THROWS_AS(KeyValueConfig::parse_file(file), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse_file("/nonexistent/gbflow.cfg"), IoError);
}

TEST_CASE("run config validation names the offending field") {
  KeyValueConfig kv;
  kv.values["mode"] = "nonsense";
  CHECK_THROWS_WITH_AS(RunConfig::from_key_values(kv),
                       doctest::Contains("mode"), ConfigError);
  kv.values["mode"] = "graph";
  kv.values["t_end"] = "abc";
  CHECK_THROWS_WITH_AS(RunConfig::from_key_values(kv),
                       doctest::Contains("t_end"), ConfigError);
  kv.values["t_end"] = "1";
  kv.values["ic"] = "sine";
  const RunConfig cfg = RunConfig::from_key_values(kv);
  CHECK_THROWS_WITH_AS(cfg.graph_initial(Grid1D(64)), doctest::Contains("ic"),
                       ConfigError);
}

TEST_CASE("initial condition presets") {
  KeyValueConfig kv;
  kv.values["ic"] = "sine 0.5 2 0.25";
  RunConfig cfg = RunConfig::from_key_values(kv);
  const Grid1D grid(64);
  const std::vector<double> u = cfg.graph_initial(grid);
  CHECK(u[0] == doctest::Approx(0.25));
  CHECK(u[8] == doctest::Approx(0.25 + 0.5 * std::sin(2.0 * M_PI * 2 * 0.125)));

  kv.values["ic"] = "circle 2";
  kv.values["mode"] = "curve";
  kv.values["m"] = "32";
  cfg = RunConfig::from_key_values(kv);
  const CurveState c = cfg.curve_initial();
  CHECK(c.pts.size() == 32);
  CHECK(c.pts[0].x == doctest::Approx(2.0));
}

TEST_CASE("17-digit formatting round-trips doubles exactly") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e17, 1e-300, 3.0517578125e-5,
                   0.30000000000000004}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("cmd_run writes the run directory contract") {
  const fs::path dir = fresh_dir("run_graph");
  RunConfig cfg = example_config(dir);
  cfg.t_end = 1.0;
  cfg.snapshot_every = 1000;
  std::ostringstream log;
  CHECK(cli::cmd_run(cfg, log) == cli::kOk);

  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "snapshot_00000000.csv"));
  CHECK(fs::exists(dir / "diagnostics.csv"));
  const std::string diag = slurp(dir / "diagnostics.csv");
  CHECK(diag.rfind("t,alpha,E,length,sup_v,sup_u,h1,h2,h3,sup_kappa\n", 0) == 0);

  // Final alpha is exp(-1) to 1e-6 relative (flat explicit solution).
  std::vector<std::string> header;
  const auto rows = read_csv(dir / "diagnostics.csv", &header);
  CHECK(header.size() == 10);
  const double alpha_final = rows.back()[1];
  CHECK(std::abs(alpha_final - std::exp(-1.0)) <= 1e-6 * std::exp(-1.0));

  // Manifest round-trip: re-verify from the directory alone.
  std::ostringstream vlog;
  CHECK(cli::cmd_verify_dir(dir, vlog) == cli::kOk);
}

TEST_CASE("t_end = 0 is a single-snapshot run") {
  const fs::path dir = fresh_dir("run_zero");
  RunConfig cfg = example_config(dir);
  cfg.t_end = 0.0;
  std::ostringstream log;
  CHECK(cli::cmd_run(cfg, log) == cli::kOk);
  const auto rows = read_csv(dir / "diagnostics.csv");
  CHECK(rows.size() == 1);
}

TEST_CASE("cmd_run curve mode reaches extinction near 0.5") {
  const fs::path dir = fresh_dir("run_curve");
  KeyValueConfig kv;
  kv.values = {{"mode", "curve"},  {"m", "64"},    {"ic", "circle 1"},
               {"sigma", "quadratic_shifted"},     {"alpha0", "0"},
               {"t_end", "1"},     {"dt", "auto"}, {"out", dir.string()}};
  const RunConfig cfg = RunConfig::from_key_values(kv);
  std::ostringstream log;
  CHECK(cli::cmd_run(cfg, log) == cli::kOk);
  CHECK(fs::exists(dir / "extinction_report.json"));
  const std::string report = slurp(dir / "extinction_report.json");
  CHECK(report.find("\"extinct\"") != std::string::npos);

  std::ostringstream vlog;
  CHECK(cli::cmd_verify_dir(dir, vlog) == cli::kOk);
}

TEST_CASE("verify: flat explicit solution passes every applicable check") {
  const fs::path dir = fresh_dir("verify_flat");
  const RunConfig cfg = example_config(dir);
  std::ostringstream log;
  CHECK(cli::cmd_verify(cfg, log) == cli::kOk);
  CHECK(log.str().find("all checks passed") != std::string::npos);
  CHECK(log.str().find("FAIL") == std::string::npos);
  // The check batch is also serialized as a flat JSON document.
  const std::string json = slurp(dir / "verify_report.json");
  CHECK(json.find("\"name\"") != std::string::npos);
  CHECK(json.find("\"worst_violation\"") != std::string::npos);
  CHECK(json.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("verify: degenerate sigma reports n/a for A1 checks and passes") {
  const fs::path dir = fresh_dir("verify_degenerate");
  KeyValueConfig kv;
  kv.values = {{"mode", "graph"}, {"n", "64"},  {"ic", "constant 0"},
               {"alpha0", "0"},   {"dt", "1e-4"}, {"t_end", "0.02"},
               {"sigma", "quadratic"}, {"out", dir.string()}};
  const RunConfig cfg = RunConfig::from_key_values(kv);
  std::ostringstream log;
  CHECK(cli::cmd_verify(cfg, log) == cli::kOk);
  CHECK(log.str().find("n/a") != std::string::npos);
}

TEST_CASE("verify: forcing a huge dt breaks the dissipation identity") {
  const fs::path dir = fresh_dir("verify_forced");
  KeyValueConfig kv;
  kv.values = {{"mode", "graph"},  {"n", "64"},   {"ic", "sine 0.2 1"},
               {"alpha0", "1"},    {"dt", "2e-3"}, {"t_end", "0.05"},
               {"sigma", "quadratic_shifted"},     {"force_dt", "1"},
               {"out", dir.string()}};
  const RunConfig cfg = RunConfig::from_key_values(kv);
  std::ostringstream log;
  CHECK(cli::cmd_verify(cfg, log) == cli::kCheckFailure);
  CHECK(log.str().find("FAIL") != std::string::npos);
}

TEST_CASE("saved runs reload bit for bit") {
  const fs::path dir = fresh_dir("roundtrip");
  RunConfig cfg = example_config(dir);
  cfg.ic = "sine 0.4 2";
  cfg.t_end = 0.003;
  cfg.snapshot_every = 7;
  std::ostringstream log;
  REQUIRE(cli::cmd_run(cfg, log) == cli::kOk);

  const SavedRun saved = read_run(dir);
  CHECK(saved.is_graph);
  const Grid1D grid(cfg.n);
  const Trajectory traj = run(cfg.graph_initial(grid), cfg.alpha0, grid,
                              cfg.params(), cfg.sigma_model(), cfg.snapshot_every);
  REQUIRE(saved.rows.size() == traj.rows.size());
  for (std::size_t k = 0; k < traj.rows.size(); ++k) {
    CHECK(saved.rows[k].t == traj.rows[k].t);
    CHECK(saved.rows[k].alpha == traj.rows[k].alpha);
    CHECK(saved.rows[k].energy == traj.rows[k].energy);
    CHECK(saved.rows[k].h3 == traj.rows[k].h3);
  }
  REQUIRE(saved.graph_snapshots.size() == traj.snapshots.size());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    CHECK(saved.graph_snapshots[k].step == traj.snapshots[k].step);
    for (std::size_t i = 0; i < traj.snapshots[k].u.size(); ++i)
      CHECK(saved.graph_snapshots[k].u[i] == traj.snapshots[k].u[i]);
  }
}

TEST_CASE("determinism: identical configs produce byte-identical CSVs") {
  const fs::path dir1 = fresh_dir("det_1");
  const fs::path dir2 = fresh_dir("det_2");
  RunConfig cfg = example_config(dir1);
  cfg.ic = "sine 0.3 1";
  cfg.t_end = 0.01;
  std::ostringstream log;
  CHECK(cli::cmd_run(cfg, log) == cli::kOk);
  cfg.out = dir2.string();
  CHECK(cli::cmd_run(cfg, log) == cli::kOk);
  CHECK(slurp(dir1 / "diagnostics.csv") == slurp(dir2 / "diagnostics.csv"));
  CHECK(!slurp(dir1 / "diagnostics.csv").empty());
}

TEST_CASE("plot emits well-formed SVG files") {
  const fs::path dir = fresh_dir("plot_run");
  RunConfig cfg = example_config(dir);
  cfg.t_end = 0.05;
  cfg.snapshot_every = 100;
  std::ostringstream log;
  CHECK(cli::cmd_run(cfg, log) == cli::kOk);
  CHECK(cli::cmd_plot(dir, log) == cli::kOk);
  for (const char* name : {"snapshots.svg", "series.svg", "decay.svg"}) {
    CAPTURE(name);
    const std::string svg = slurp(dir / name);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  CHECK(slurp(dir / "decay.svg").find("rate") != std::string::npos);

  std::ostringstream elog;
  CHECK(cli::cmd_plot(fresh_dir("plot_empty"), elog) == cli::kIo);
}

TEST_CASE("sweep expands the cartesian product in parallel") {
  const fs::path root = fresh_dir("sweep");
  KeyValueConfig kv;
  kv.values = {{"mode", "graph"},   {"n", "32"},        {"ic", "constant 0"},
               {"alpha0", "0.5,1"}, {"gamma", "1,2"},   {"dt", "1e-3"},
               {"t_end", "0.01"},   {"sigma", "quadratic_shifted"},
               {"out", root.string()}};
  std::ostringstream log;
  CHECK(cli::cmd_sweep(kv, 2, log) == cli::kOk);
  int dirs = 0;
  for (int i = 0; i < 4; ++i)
    if (fs::exists(root / ("sweep_" + std::to_string(i)) / "manifest.json")) ++dirs;
  CHECK(dirs == 4);
}

TEST_CASE("convergence ladder meets the declared minima") {
  KeyValueConfig kv;
  kv.values = {{"mode", "graph"}, {"n", "64"}};
  const RunConfig cfg = RunConfig::from_key_values(kv);
  std::ostringstream log;
  CHECK(cli::cmd_convergence(cfg, log) == cli::kOk);
  const std::string out = log.str();
  CHECK(out.find("all orders met") != std::string::npos);
  // Self-convergence order of the default ladder sits in [1.8, 2.2].
  const auto pos = out.find("self_convergence");
  REQUIRE(pos != std::string::npos);
  const auto order_pos = out.find("order ", pos);
  REQUIRE(order_pos != std::string::npos);
  const double order = std::strtod(out.c_str() + order_pos + 6, nullptr);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
}

TEST_CASE("convergence ladder on constant data reports exact") {
  KeyValueConfig kv;
  kv.values = {{"mode", "graph"}, {"n", "64"}, {"ic", "constant 1"},
               {"alpha0", "0"},   {"t_end", "0.01"}};
  const RunConfig cfg = RunConfig::from_key_values(kv);
  std::ostringstream log;
  CHECK(cli::cmd_convergence(cfg, log) == cli::kOk);
  CHECK(log.str().find("exact") != std::string::npos);
}
