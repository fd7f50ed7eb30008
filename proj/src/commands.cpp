#include "gbflow/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "gbflow/diagnostics.hpp"
#include "gbflow/errors.hpp"
#include "gbflow/run_io.hpp"
#include "gbflow/svg.hpp"

namespace gbflow::cli {

namespace fs = std::filesystem;

namespace {

// Sigma(t0) budget for the verify-time monotonicity window. The kernel is a
// plane Gaussian clipped to one period, so flat runs (no curvature
// dissipation) need sqrt(tau) well under the period; 0.005 keeps the
// clipped-tail drift two orders below the alpha dissipation.
constexpr double kMonotonicityTauBudget = 5e-3;

struct Timer {
  std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
        .count();
  }
};

int map_exception(std::ostream& log) {
  try {
    throw;
  } catch (const ConfigError& e) {
    log << "error (usage): " << e.what() << '\n';
    return kUsage;
  } catch (const DivergenceError& e) {
    log << "error (divergence): " << e.what() << '\n';
    return kDivergence;
  } catch (const IoError& e) {
    log << "error (io): " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
}

Trajectory simulate_graph(const RunConfig& config) {
  const Grid1D grid(config.n);
  return run(config.graph_initial(grid), config.alpha0, grid, config.params(),
             config.sigma_model(), config.snapshot_every);
}

CurveRunResult simulate_curve(const RunConfig& config) {
  return run_curve(config.curve_initial(), config.params(), config.sigma_model(),
                   config.reparam_every, config.snapshot_every);
}

void print_report_row(std::ostream& log, const CheckReport& r) {
  std::ostringstream row;
  row << "  " << std::left << std::setw(26) << r.name;
  if (!r.applicable) {
    row << "n/a       " << r.note;
  } else {
    row << (r.passed ? "pass      " : "FAIL      ");
    row << "worst " << std::setprecision(3) << std::scientific << r.worst_violation
        << "  tol " << r.tolerance << "  at t=" << std::defaultfloat << r.location;
  }
  log << row.str() << '\n';
}

// Decay-rate fit as a check: applicable only when the series really decayed.
CheckReport fit_check(const std::string& name, const std::vector<double>& t,
                      const std::vector<double>& y) {
  if (y.empty() || !(y.front() > 0.0))
    return CheckReport::not_applicable(name, "series not positive");
  if (!(y.back() < 0.9 * y.front()))
    return CheckReport::not_applicable(name, "series did not decay");
  CheckReport r;
  r.name = name;
  try {
    const DecayFit fit = decay_fit(t, y, 0.5 * t.back(), t.back());
    r.passed = fit.rate > 0.0 && fit.r_squared >= 0.99;
    r.worst_violation = 1.0 - fit.r_squared;
    r.tolerance = 0.01;
    r.location = t.back();
    std::ostringstream note;
    note << "rate " << std::setprecision(4) << fit.rate << ", r^2 "
         << fit.r_squared;
    r.note = note.str();
  } catch (const FitError& e) {
    return CheckReport::not_applicable(name, e.what());
  }
  return r;
}

// Picks t0 so that Sigma(t0) stays inside the tau budget, then runs the
// weighted monotonicity check. Not applicable when the resolvable window is
// too short.
CheckReport monotonicity_check(const Trajectory& traj, const SigmaModel& model,
                               const Params& params) {
  if (!model.satisfies_A1)
    return CheckReport::not_applicable("weighted_monotonicity",
                                       "requires assumption A1");
  const SigmaSchedule schedule = SigmaSchedule::from_trajectory(traj, model);
  double t0 = traj.t_end();
  if (params.mu * schedule.integral_at(t0) > kMonotonicityTauBudget) {
    // Walk back to the budget boundary.
    for (const GraphSnapshot& s : traj.snapshots) {
      if (params.mu * schedule.integral_at(s.t) > kMonotonicityTauBudget) {
        t0 = s.t;
        break;
      }
    }
  }
  try {
    const SeriesCheck check = monotonicity_series(traj, model, params, 0.5, t0,
                                                  WeightFunction::AreaElement);
    return check.report;
  } catch (const DiagnosticError& e) {
    return CheckReport::not_applicable("weighted_monotonicity", e.what());
  }
}

std::vector<CheckReport> graph_checks(const Trajectory& traj, const SigmaModel& model,
                                      const Params& params) {
  std::vector<CheckReport> reports = bound_checks(traj, model);
  try {
    reports.push_back(dissipation_residual(traj, model, params).report);
  } catch (const DiagnosticError& e) {
    reports.push_back(CheckReport::not_applicable("dissipation_identity", e.what()));
  }
  try {
    reports.push_back(length_dissipation_check(traj, model, params).report);
  } catch (const DiagnosticError& e) {
    reports.push_back(CheckReport::not_applicable("length_dissipation", e.what()));
  }
  reports.push_back(monotonicity_check(traj, model, params));

  std::vector<double> t, abs_alpha, h1;
  for (const DiagnosticsRow& r : traj.rows) {
    t.push_back(r.t);
    abs_alpha.push_back(std::abs(r.alpha));
    h1.push_back(r.h1);
  }
  reports.push_back(fit_check("alpha_decay_fit", t, abs_alpha));
  reports.push_back(fit_check("h1_decay_fit", t, h1));
  return reports;
}

std::vector<CheckReport> curve_checks(const CurveTrajectory& traj,
                                      const SigmaModel& model) {
  std::vector<CheckReport> reports;
  {
    CheckReport r;
    r.name = "misorientation_bound";
    if (!model.satisfies_A2) {
      r = CheckReport::not_applicable(r.name, "requires assumption A2");
    } else {
      r.tolerance = 1e-12;
      const double bound = std::abs(traj.rows.front().alpha);
      for (const auto& row : traj.rows) {
        const double v = std::abs(row.alpha) - bound;
        if (v > r.worst_violation) {
          r.worst_violation = v;
          r.location = row.t;
        }
      }
      r.passed = r.worst_violation <= r.tolerance;
    }
    reports.push_back(r);
  }
  {
    CheckReport r;
    r.name = "perimeter_monotone";
    r.tolerance = 1e-10;
    const double bound = traj.rows.front().perimeter;
    for (const auto& row : traj.rows) {
      const double v = row.perimeter - bound;
      if (v > r.worst_violation) {
        r.worst_violation = v;
        r.location = row.t;
      }
    }
    r.passed = r.worst_violation <= r.tolerance;
    reports.push_back(r);
  }
  return reports;
}

int summarize(std::ostream& log, const std::vector<CheckReport>& reports,
              const fs::path& report_path) {
  bool all_pass = true;
  for (const CheckReport& r : reports) {
    print_report_row(log, r);
    if (r.applicable && !r.passed) all_pass = false;
  }
  log << (all_pass ? "all checks passed" : "CHECK FAILURE") << '\n';
  if (!report_path.empty()) write_check_reports(report_path, reports);
  return all_pass ? kOk : kCheckFailure;
}

// Rebuilds in-memory graph state from a saved run for re-verification.
Trajectory trajectory_from_saved(const SavedRun& saved, const RunConfig& config) {
  Trajectory traj;
  traj.grid = Grid1D(config.n);
  traj.params = config.params();
  traj.rows = saved.rows;
  traj.snapshots = saved.graph_snapshots;
  if (traj.snapshots.empty())
    throw IoError("saved run has no graph snapshots");
  return traj;
}

RunConfig config_from_saved(const SavedRun& saved) {
  KeyValueConfig kv;
  for (const auto& [key, value] : saved.config) kv.values[key] = value;
  return RunConfig::from_key_values(kv);
}

int run_into_dir(const RunConfig& config, const fs::path& dir, std::ostream& log,
                 Trajectory* graph_out, CurveRunResult* curve_out) {
  Timer timer;
  RunArtifacts artifacts{dir};
  if (config.mode == "graph") {
    Trajectory traj = simulate_graph(config);
    write_graph_run(artifacts, traj);
    write_manifest(artifacts, config.echo(), timer.seconds());
    log << "run: " << traj.rows.size() - 1 << " steps to t=" << traj.t_end()
        << ", wrote " << dir.string() << '\n';
    if (graph_out) *graph_out = std::move(traj);
  } else {
    CurveRunResult result = simulate_curve(config);
    write_curve_run(artifacts, result.trajectory, result.report);
    write_manifest(artifacts, config.echo(), timer.seconds());
    log << "run: curve status " << to_string(result.report.status) << " at t="
        << result.report.time << ", wrote " << dir.string() << '\n';
    if (curve_out) *curve_out = std::move(result);
  }
  return kOk;
}

}  // namespace

fs::path resolve_out_dir(const RunConfig& config) {
  if (!config.out.empty()) return config.out;
  const char* root = std::getenv("GBFLOW_OUT_ROOT");
  return fs::path(root ? root : "runs") / "run";
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  try {
    return run_into_dir(config, resolve_out_dir(config), log, nullptr, nullptr);
  } catch (...) {
    return map_exception(log);
  }
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  try {
    if (config.mode == "graph") {
      Trajectory traj;
      run_into_dir(config, resolve_out_dir(config), log, &traj, nullptr);
      return summarize(log, graph_checks(traj, config.sigma_model(), config.params()),
                       resolve_out_dir(config) / "verify_report.json");
    }
    CurveRunResult result;
    run_into_dir(config, resolve_out_dir(config), log, nullptr, &result);
    return summarize(log, curve_checks(result.trajectory, config.sigma_model()),
                     resolve_out_dir(config) / "verify_report.json");
  } catch (...) {
    return map_exception(log);
  }
}

int cmd_verify_dir(const fs::path& dir, std::ostream& log) {
  try {
    const SavedRun saved = read_run(dir);
    const RunConfig config = config_from_saved(saved);
    if (saved.is_graph) {
      const Trajectory traj = trajectory_from_saved(saved, config);
      return summarize(log, graph_checks(traj, config.sigma_model(), config.params()),
                       dir / "verify_report.json");
    }
    CurveTrajectory traj;
    traj.params = config.params();
    for (const DiagnosticsRow& r : saved.rows) {
      CurveDiagnosticsRow row;
      row.t = r.t;
      row.alpha = r.alpha;
      row.energy = r.energy;
      row.perimeter = r.length;
      row.r_origin = r.sup_v;
      row.r_centroid = r.sup_u;
      row.sup_kappa = r.sup_kappa;
      traj.rows.push_back(row);
    }
    traj.snapshots = saved.curve_snapshots;
    return summarize(log, curve_checks(traj, config.sigma_model()),
                     dir / "verify_report.json");
  } catch (...) {
    return map_exception(log);
  }
}

int cmd_convergence(const RunConfig& base, std::ostream& log) {
  try {
    if (base.mode != "graph")
      throw ConfigError("convergence ladder runs in graph mode");
    RunConfig config = base;
    if (base.ic == "constant 0" && base.t_end == 1.0) {
      // Library defaults produce the standard ladder.
      config.ic = "sine 0.1 1";
      config.alpha0 = 1.0;
      config.t_end = 0.01;
    }
    config.snapshot_every = 1;

    const SigmaModel model = config.sigma_model();
    std::vector<int> ns{config.n, 2 * config.n, 4 * config.n};
    std::vector<Trajectory> trajs;
    std::vector<Params> params_per_level;
    const double sigma0 = model.eval(config.alpha0);
    double dt0 = config.dt == "auto"
                     ? config.cfl_safety / (ns[0] * double(ns[0])) /
                           (config.mu * (sigma0 > 0 ? sigma0 : 1.0))
                     : std::stod(config.dt);
    for (int level = 0; level < 3; ++level) {
      RunConfig c = config;
      c.n = ns[level];
      Params p = c.params();
      p.dt = dt0 / std::pow(4.0, level);
      p.force_dt = true;  // the ladder fixes dt explicitly
      const Grid1D grid(c.n);
      trajs.push_back(run(c.graph_initial(grid), c.alpha0, grid, p, model,
                          /*snapshot_every=*/1));
      params_per_level.push_back(p);
    }

    const auto final_u = [](const Trajectory& t) { return t.snapshots.back().u; };
    const auto restrict_err = [](const std::vector<double>& coarse,
                                 const std::vector<double>& fine, int ratio) {
      double worst = 0.0;
      for (std::size_t i = 0; i < coarse.size(); ++i)
        worst = std::max(worst,
                         std::abs(coarse[i] - fine[i * static_cast<std::size_t>(ratio)]));
      return worst;
    };
    // Three-level estimator: consecutive-level differences are unbiased for
    // the order (a fixed fine reference would read log2(5) at true order 2).
    const double e1 = restrict_err(final_u(trajs[0]), final_u(trajs[1]), 2);
    const double e2 = restrict_err(final_u(trajs[1]), final_u(trajs[2]), 2);

    const double r_diss_1 =
        dissipation_residual(trajs[0], model, params_per_level[0]).report.worst_violation;
    const double r_diss_2 =
        dissipation_residual(trajs[1], model, params_per_level[1]).report.worst_violation;
    const double r_len_1 =
        length_dissipation_check(trajs[0], model, params_per_level[0]).report.worst_violation;
    const double r_len_2 =
        length_dissipation_check(trajs[1], model, params_per_level[1]).report.worst_violation;

    // Kernel identity residual from each level's schedule at a shared node.
    const auto kernel_residual = [&](const Trajectory& traj, const Params& p) {
      const SigmaSchedule schedule = SigmaSchedule::from_trajectory(traj, model);
      const double t0 = traj.t_end();
      const BackwardKernel kernel({0.3, 0.1}, t0, schedule, p.mu);
      const double t = traj.rows[traj.rows.size() / 2].t;
      const Vec2 x{0.55, 0.3};
      const Vec2 a{std::sqrt(0.5), std::sqrt(0.5)};
      return kernel.identity_residual(x, t, a);
    };
    const double r_ker_1 = kernel_residual(trajs[0], params_per_level[0]);
    const double r_ker_2 = kernel_residual(trajs[1], params_per_level[1]);

    struct OrderRow {
      const char* name;
      double coarse, fine, order, minimum;
    };
    // Orders are quoted against the controlling small parameter: grid ratio
    // 2 for the spatial families, dt ratio 4 for the kernel schedule.
    const auto order_of = [](double c, double f, double h_ratio) {
      if (c < 1e-13 && f < 1e-13) return std::numeric_limits<double>::infinity();
      return std::log(c / f) / std::log(h_ratio);
    };
    std::vector<OrderRow> table{
        {"self_convergence", e1, e2, order_of(e1, e2, 2.0), 1.8},
        {"dissipation_residual", r_diss_1, r_diss_2,
         order_of(r_diss_1, r_diss_2, 2.0), 1.5},
        {"length_dissipation_residual", r_len_1, r_len_2,
         order_of(r_len_1, r_len_2, 2.0), 1.5},
        {"kernel_identity_residual", r_ker_1, r_ker_2,
         order_of(r_ker_1, r_ker_2, 4.0), 1.8},
    };

    bool all_ok = true;
    log << "convergence ladder n=" << ns[0] << "," << ns[1] << "," << ns[2]
        << " dt0=" << dt0 << '\n';
    for (const OrderRow& row : table) {
      const bool exact = std::isinf(row.order);
      const bool ok = exact || row.order >= row.minimum;
      all_ok = all_ok && ok;
      log << "  " << std::left << std::setw(30) << row.name;
      if (exact)
        log << "exact";
      else
        log << std::setprecision(3) << row.coarse << " -> " << row.fine
            << "  order " << row.order << " (min " << row.minimum << ")";
      log << (ok ? "" : "  FAIL") << '\n';
    }
    log << (all_ok ? "all orders met" : "ORDER FAILURE") << '\n';
    return all_ok ? kOk : kCheckFailure;
  } catch (...) {
    return map_exception(log);
  }
}

int cmd_plot(const fs::path& run_dir, std::ostream& log) {
  try {
    const SavedRun saved = read_run(run_dir);

    {
      SvgPlot plot(saved.is_graph ? "snapshots u(x)" : "curve snapshots");
      const std::size_t count =
          saved.is_graph ? saved.graph_snapshots.size() : saved.curve_snapshots.size();
      if (count == 0) throw IoError("run has no snapshots to plot");
      const std::size_t stride = std::max<std::size_t>(1, count / 12);
      if (saved.is_graph) {
        const int n = static_cast<int>(saved.graph_snapshots.front().u.size());
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(i) / n;
        for (std::size_t k = 0; k < count; k += stride) {
          const auto& s = saved.graph_snapshots[k];
          std::ostringstream label;
          label << "t=" << std::setprecision(3) << s.t;
          plot.add_series(x, s.u, k == 0 ? label.str() : "");
        }
      } else {
        for (std::size_t k = 0; k < count; k += stride) {
          const auto& s = saved.curve_snapshots[k];
          std::vector<double> x, y;
          for (const Vec2& p : s.pts) {
            x.push_back(p.x);
            y.push_back(p.y);
          }
          if (!s.pts.empty()) {  // close the loop
            x.push_back(s.pts.front().x);
            y.push_back(s.pts.front().y);
          }
          plot.add_series(x, y);
        }
      }
      plot.write(run_dir / "snapshots.svg");
    }

    std::vector<double> t, energy, length, abs_alpha;
    for (const DiagnosticsRow& r : saved.rows) {
      t.push_back(r.t);
      energy.push_back(r.energy);
      length.push_back(r.length);
      abs_alpha.push_back(std::abs(r.alpha));
    }
    {
      SvgPlot plot("energy and length");
      plot.add_series(t, energy, "E(t)");
      plot.add_series(t, length, "|Gamma|(t)");
      plot.write(run_dir / "series.svg");
    }
    {
      SvgPlot plot("decay (log scale)");
      plot.set_log_y(true);
      bool have_decay = false;
      if (abs_alpha.front() > 0.0 && abs_alpha.back() > 0.0 &&
          abs_alpha.back() < abs_alpha.front()) {
        plot.add_series(t, abs_alpha, "|alpha|(t)");
        try {
          const DecayFit fit = decay_fit(t, abs_alpha, 0.5 * t.back(), t.back());
          std::vector<double> fit_y(t.size());
          const double y_end = abs_alpha.back();
          for (std::size_t i = 0; i < t.size(); ++i)
            fit_y[i] = y_end * std::exp(-fit.rate * (t[i] - t.back()));
          plot.add_series(t, fit_y, "fit");
          std::ostringstream note;
          note << "rate = " << std::setprecision(4) << fit.rate;
          plot.add_annotation(note.str());
          have_decay = true;
        } catch (const FitError&) {
        }
      }
      if (have_decay) plot.write(run_dir / "decay.svg");
    }

    log << "wrote plots into " << run_dir.string() << '\n';
    return kOk;
  } catch (...) {
    return map_exception(log);
  }
}

int cmd_sweep(const KeyValueConfig& base, int workers, std::ostream& log) {
  try {
    if (workers < 1) throw ConfigError("sweep needs at least one worker");

    // Cartesian product over comma-separated values.
    std::vector<KeyValueConfig> combos{KeyValueConfig{}};
    combos[0] = base;
    for (const auto& [key, value] : base.values) {
      if (value.find(',') == std::string::npos) continue;
      std::vector<std::string> options;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) options.push_back(item);
      std::vector<KeyValueConfig> expanded;
      for (const KeyValueConfig& combo : combos)
        for (const std::string& option : options) {
          KeyValueConfig next = combo;
          next.values[key] = option;
          expanded.push_back(std::move(next));
        }
      combos = std::move(expanded);
    }

    RunConfig probe = RunConfig::from_key_values(combos.front());
    const fs::path root = resolve_out_dir(probe);

    std::vector<int> results(combos.size(), kOk);
    std::vector<std::string> logs(combos.size());
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= combos.size()) return;
        std::ostringstream local;
        try {
          RunConfig config = RunConfig::from_key_values(combos[i]);
          config.out = (root / ("sweep_" + std::to_string(i))).string();
          results[i] = run_into_dir(config, config.out, local, nullptr, nullptr);
        } catch (...) {
          results[i] = map_exception(local);
        }
        logs[i] = local.str();
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(workers, static_cast<int>(combos.size()));
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    int exit = kOk;
    for (std::size_t i = 0; i < combos.size(); ++i) {
      log << "[sweep " << i << "] " << (results[i] == kOk ? "ok" : "FAILED") << '\n'
          << logs[i];
      if (results[i] != kOk && exit == kOk) exit = results[i];
    }
    log << "sweep finished: " << combos.size() << " runs\n";
    return exit;
  } catch (...) {
    return map_exception(log);
  }
}

}  // namespace gbflow::cli
