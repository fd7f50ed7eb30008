// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbflow/commands.hpp"
#include "gbflow/config.hpp"
#include "gbflow/curve_solver.hpp"
#include "gbflow/diagnostics.hpp"
#include "gbflow/graph_solver.hpp"
#include "gbflow/kernel.hpp"

using namespace gbflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %2d %-22s %s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::vector<double> sine(const Grid1D& grid, double a, double k, double b = 0.0) {
  std::vector<double> u(grid.n);
  for (int i = 0; i < grid.n; ++i) u[i] = a * std::sin(kTwoPi * k * grid.x(i)) + b;
  return u;
}

double stable_dt0(int n, double sigma, double mu = 1.0) {
  return 0.5 / (double(n) * double(n)) / (mu * sigma);
}

struct Timer {
  std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
        .count();
  }
};

// Criterion 6 applies to every graph trajectory the suite produces.
struct BoundAudit {
  bool ok = true;
  std::string detail = "all bounds held on every suite run";
  void feed(const Trajectory& traj, const SigmaModel& model, double alpha0) {
    const double sup_u0 = traj.rows.front().sup_u;
    const double len0 = traj.rows.front().length;
    const double sup_v0 = traj.rows.front().sup_v;
    const double grad_bound =
        model.satisfies_A1
            ? model.eval(alpha0) / model.c_lower * sup_v0 * sup_v0
            : 0.0;
    for (const DiagnosticsRow& row : traj.rows) {
      if (model.satisfies_A1 && row.sup_u > sup_u0 + 1e-10)
        fail("max principle", row.t);
      if (model.satisfies_A2 && std::abs(row.alpha) > std::abs(alpha0) + 1e-12)
        fail("misorientation bound", row.t);
      if (row.length > len0 + 1e-10) fail("length bound", row.t);
      if (model.satisfies_A1 && row.sup_v > grad_bound)
        fail("gradient estimate", row.t);
    }
  }
  void fail(const std::string& what, double t) {
    if (ok) {
      std::ostringstream ss;
      ss << what << " violated at t=" << t;
      detail = ss.str();
    }
    ok = false;
  }
};
BoundAudit g_bounds;

Trajectory g_criterion4_traj{};  // shared with criterion 5

// ---------------------------------------------------------------------------
// 1. Explicit solution of the flat profile.
// ---------------------------------------------------------------------------
void criterion_1() {
  Timer timer;
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  const Grid1D grid(16);
  const double c1 = 0.5, c2 = 1.0;
  Params p;
  p.dt = 1e-4;
  p.t_end = 1.0;
  const Trajectory traj = run(std::vector<double>(16, c1), c2, grid, p, qs, 100);
  g_bounds.feed(traj, qs, c2);

  const double alpha_err =
      std::abs(traj.rows.back().alpha - c2 * std::exp(-1.0)) /
      (c2 * std::exp(-1.0));
  double u_err = 0.0;
  for (double w : traj.back().u) u_err = std::max(u_err, std::abs(w - c1));
  const double wall = timer.seconds();

  std::ostringstream ss;
  ss << "alpha rel err " << alpha_err << " (tol 1e-6); max|u-c1| " << u_err
     << " (tol 1e-13); " << wall << " s (limit 1)";
  report(1, "explicit-solution",
         alpha_err <= 1e-6 && u_err <= 1e-13 && wall < 1.0, ss.str());
}

// ---------------------------------------------------------------------------
// 2. Shrinking circle against sqrt(1 - 2t).
// ---------------------------------------------------------------------------
void criterion_2() {
  Timer timer;
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  Params p;
  p.dt = 1.0;
  p.t_end = 1.0;
  const CurveRunResult result = run_curve(make_circle(1.0, 256), p, qs, 64, 1 << 20);

  double worst = 0.0;
  for (const CurveDiagnosticsRow& row : result.trajectory.rows) {
    const double exact = std::sqrt(std::max(0.0, 1.0 - 2.0 * row.t));
    if (exact < 0.2) break;
    worst = std::max(worst, std::abs(row.r_origin - exact) / exact);
  }
  const double t_ext = result.report.time;
  const bool extinct = result.report.status == CurveStatus::ExtinctPerimeter;
  const double wall = timer.seconds();

  std::ostringstream ss;
  ss << "radius rel err " << worst << " (tol 1e-2); extinction at " << t_ext
     << " (0.5 +- 0.01); " << wall << " s (limit 10)";
  report(2, "shrinking-circle",
         extinct && worst <= 1e-2 && std::abs(t_ext - 0.5) <= 0.01 && wall < 10.0,
         ss.str());
}

// ---------------------------------------------------------------------------
// 3. Coupled circle against the scalar ODE oracle.
// ---------------------------------------------------------------------------
void criterion_3() {
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  Params p;
  p.dt = 1.0;
  p.t_end = 1.0;
  const CurveRunResult result =
      run_curve(make_circle(1.0, 256, {0, 0}, 2.0), p, qs, 64, 1 << 20);

  // r' = -mu sigma(alpha)/r, alpha' = -gamma alpha 2 pi r, RK4 at dt = 1e-6.
  double r = 1.0, alpha = 2.0, t = 0.0;
  const double h = 1e-6;
  const auto rhs = [&p](double rr, double aa, double* dr, double* da) {
    const double sigma = 1.0 + 0.5 * aa * aa;
    *dr = -p.mu * sigma / rr;
    *da = -p.gamma * aa * kTwoPi * rr;
  };
  double worst = 0.0;
  for (const CurveDiagnosticsRow& row : result.trajectory.rows) {
    while (t < row.t - 1e-15) {
      const double dt = std::min(h, row.t - t);
      double k1r, k1a, k2r, k2a, k3r, k3a, k4r, k4a;
      rhs(r, alpha, &k1r, &k1a);
      rhs(r + 0.5 * dt * k1r, alpha + 0.5 * dt * k1a, &k2r, &k2a);
      rhs(r + 0.5 * dt * k2r, alpha + 0.5 * dt * k2a, &k3r, &k3a);
      rhs(r + dt * k3r, alpha + dt * k3a, &k4r, &k4a);
      r += dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
      alpha += dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      t += dt;
    }
    if (r < 0.2) break;
    worst = std::max(worst, std::abs(row.r_origin - r) / r);
  }

  std::ostringstream ss;
  ss << "radius rel err vs ODE oracle " << worst << " (tol 1e-2)";
  report(3, "coupled-circle", worst <= 1e-2, ss.str());
}

// ---------------------------------------------------------------------------
// 4. Free-energy dissipation identity with one refinement level.
// ---------------------------------------------------------------------------
void criterion_4() {
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  const auto residual_run = [&](int n, double dt) {
    const Grid1D grid(n);
    Params p;
    p.dt = dt;
    p.t_end = 0.01;
    p.force_dt = true;
    Trajectory traj = run(sine(grid, 0.2, 1.0), 1.0, grid, p, qs, 1);
    g_bounds.feed(traj, qs, 1.0);
    const SeriesCheck check = dissipation_residual(traj, qs, p);
    if (n == 256) g_criterion4_traj = std::move(traj);
    return check;
  };
  const double dt0 = stable_dt0(256, qs.eval(1.0));
  const SeriesCheck coarse = residual_run(256, dt0);
  const SeriesCheck fine = residual_run(512, dt0 / 4.0);
  const double order =
      std::log2(coarse.report.worst_violation / fine.report.worst_violation);

  std::ostringstream ss;
  ss << "max residual " << coarse.report.worst_violation << " (tol "
     << coarse.report.tolerance << "); refinement order " << order
     << " (min 1.5)";
  report(4, "dissipation-identity", coarse.report.passed && order >= 1.5,
         ss.str());
}

// ---------------------------------------------------------------------------
// 5. Weighted monotonicity and the kernel identity.
// ---------------------------------------------------------------------------
void criterion_5() {
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  Params p;
  p.dt = stable_dt0(256, qs.eval(1.0));
  p.t_end = 0.01;
  const SeriesCheck mono = monotonicity_series(g_criterion4_traj, qs, p, 0.5,
                                               0.01, WeightFunction::AreaElement);

  // Kernel identity at 100 seeded random points with an exact Sigma table.
  const BackwardKernel kernel({0.5, 0.2}, 1.0,
                              SigmaSchedule::constant(1.5, 0.0, 1.0, 21), 1.0);
  std::mt19937_64 rng(42);
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  double worst_kernel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double t = uniform(0.05, 0.9);
    const double tau = 1.5 * (1.0 - t);
    const double radius = uniform(0.0, 3.0 * std::sqrt(tau));
    const double phi = uniform(0.0, kTwoPi);
    const double psi = uniform(0.0, kTwoPi);
    const Vec2 x{kernel.x0.x + radius * std::cos(phi),
                 kernel.x0.y + radius * std::sin(phi)};
    worst_kernel =
        std::max(worst_kernel,
                 kernel.identity_residual(x, t, {std::cos(psi), std::sin(psi)}));
  }

  // Trapezoid Sigma over a smooth schedule: order-2 shrinkage.
  const auto residual_at = [](double h) {
    std::vector<double> t, s;
    for (double time = 0.0; time <= 0.5 + 1e-12; time += h) {
      t.push_back(time);
      const double alpha = std::exp(-time);
      s.push_back(1.0 + 0.5 * alpha * alpha);
    }
    const BackwardKernel k({0, 0}, 0.5, SigmaSchedule::from_samples(t, s), 1.0);
    return k.identity_residual({0.3, 0.2}, 0.25, {0.6, 0.8});
  };
  const double ratio = residual_at(1e-3) / residual_at(5e-4);

  std::ostringstream ss;
  ss << "M worst rate " << mono.report.worst_violation << " (tol "
     << mono.report.tolerance << "/unit time); kernel residual " << worst_kernel
     << " (tol 1e-10); trapezoid ratio " << ratio << " (~4)";
  report(5, "weighted-monotonicity",
         mono.report.passed && worst_kernel <= 1e-10 && ratio >= 3.0 &&
             ratio <= 5.5,
         ss.str());
}

// ---------------------------------------------------------------------------
// 6. A priori bounds on 20 randomized smooth initial conditions.
// ---------------------------------------------------------------------------
void criterion_6() {
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  const Grid1D grid(128);
  std::mt19937_64 rng(42);
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 20; ++trial) {
    const double a = uniform(0.0, 2.0);
    const int k = 1 + static_cast<int>(rng() % 3);
    const double b = uniform(-1.0, 1.0);
    const double alpha0 = uniform(-2.0, 2.0);
    Params p;
    p.dt = 1.0;  // capped at stable_dt
    p.t_end = 0.004;
    const Trajectory traj = run(sine(grid, a, k, b), alpha0, grid, p, qs, 64);
    g_bounds.feed(traj, qs, alpha0);
  }
  report(6, "a-priori-bounds", g_bounds.ok, g_bounds.detail);
}

// ---------------------------------------------------------------------------
// 7. Decay rates of the Sobolev seminorms and the curvature.
// ---------------------------------------------------------------------------
void criterion_7() {
  const SigmaModel qs = SigmaModel::quadratic_shifted();
  const Grid1D grid(256);

  const auto decay_run = [&](double amplitude) {
    Params p;
    p.dt = stable_dt0(256, 1.0);
    p.t_end = 0.15;
    Trajectory traj = run(sine(grid, amplitude, 1.0), 0.0, grid, p, qs, 32);
    g_bounds.feed(traj, qs, 0.0);
    return traj;
  };

  const Trajectory big = decay_run(0.1);
  std::vector<double> t, h1, h2, h3, kap;
  for (const DiagnosticsRow& r : big.rows) {
    t.push_back(r.t);
    h1.push_back(r.h1);
    h2.push_back(r.h2);
    h3.push_back(r.h3);
    kap.push_back(r.sup_kappa);
  }
  const double t_end = t.back();
  bool ok = true;
  std::ostringstream ss;
  const char* names[4] = {"h1", "h2", "h3", "k"};
  const std::vector<double>* series[4] = {&h1, &h2, &h3, &kap};
  for (int i = 0; i < 4; ++i) {
    const DecayFit fit = decay_fit(t, *series[i], 0.5 * t_end, t_end);
    ok = ok && fit.rate > 0.0 && fit.r_squared >= 0.99;
    ss << names[i] << " rate " << fit.rate << " (r2 " << fit.r_squared << "); ";
  }

  const Trajectory small = decay_run(1e-3);
  std::vector<double> ts, h1s;
  for (const DiagnosticsRow& r : small.rows) {
    ts.push_back(r.t);
    h1s.push_back(r.h1);
  }
  const DecayFit small_fit = decay_fit(ts, h1s, 0.5 * t_end, t_end);
  const double predicted = 2.0 * kTwoPi * kTwoPi;  // 2 mu (2 pi)^2
  const double rel = std::abs(small_fit.rate - predicted) / predicted;
  ss << "a=1e-3 h1 rate " << small_fit.rate << " vs " << predicted << " (rel "
     << rel << ", tol 0.15)";
  report(7, "decay-rates", ok && rel <= 0.15, ss.str());
}

// ---------------------------------------------------------------------------
// 8. Alpha decay under the degenerate quadratic sigma.
// ---------------------------------------------------------------------------
void criterion_8() {
  const SigmaModel q = SigmaModel::quadratic();
  const Grid1D grid(256);
  Params p;
  p.dt = 5e-4;
  p.t_end = 2.0;
  const Trajectory traj = run(sine(grid, 0.2, 1.0), 1.0, grid, p, q, 64);
  g_bounds.feed(traj, q, 1.0);

  double integral = 0.0, worst = 0.0;
  for (std::size_t k = 1; k < traj.rows.size(); ++k) {
    integral += 0.5 * (traj.rows[k].length + traj.rows[k - 1].length) *
                (traj.rows[k].t - traj.rows[k - 1].t);
    const double expected = std::exp(-p.gamma * integral);
    worst =
        std::max(worst, std::abs(traj.rows[k].alpha - expected) / expected);
  }

  std::vector<double> t, a;
  for (const DiagnosticsRow& r : traj.rows) {
    t.push_back(r.t);
    a.push_back(std::abs(r.alpha));
  }
  const DecayFit fit = decay_fit(t, a, 1.0, 2.0);

  std::ostringstream ss;
  ss << "alpha vs exp(-gamma trapz|Gamma|) rel err " << worst
     << " (tol 1e-4); fitted rate " << fit.rate << " (min 0.99 gamma)";
  report(8, "alpha-decay-degenerate",
         worst <= 1e-4 && fit.rate >= 0.99 * p.gamma, ss.str());
}

// ---------------------------------------------------------------------------
// 9. Line-tension identity under refinement.
// ---------------------------------------------------------------------------
void criterion_9() {
  AnisotropicSigma c2;
  c2.value = [](double th, double) { return 2.0 + std::cos(2.0 * th); };
  c2.d_theta = [](double th, double) { return -2.0 * std::sin(2.0 * th); };
  c2.d_theta2 = [](double th, double) { return -4.0 * std::cos(2.0 * th); };
  c2.d_alpha = [](double, double) { return 0.0; };

  const double r128 = line_tension_residual(make_circle(1.0, 128), c2, 0.0);
  const double r256 = line_tension_residual(make_circle(1.0, 256), c2, 0.0);
  const double r512 = line_tension_residual(make_circle(1.0, 512), c2, 0.0);
  const double o1 = std::log2(r128 / r256);
  const double o2 = std::log2(r256 / r512);

  std::ostringstream ss;
  ss << "residuals " << r128 << " -> " << r256 << " -> " << r512 << "; orders "
     << o1 << ", " << o2 << " (min 1.5)";
  report(9, "line-tension", o1 >= 1.5 && o2 >= 1.5, ss.str());
}

// ---------------------------------------------------------------------------
// 10. Determinism of the verify pipeline.
// ---------------------------------------------------------------------------
void criterion_10() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "gbflow_acceptance_det";
  fs::remove_all(root);

  KeyValueConfig kv;
  kv.values = {{"mode", "graph"}, {"n", "128"},   {"ic", "sine 0.2 1"},
               {"alpha0", "1"},   {"dt", "1e-5"}, {"t_end", "0.02"},
               {"sigma", "quadratic_shifted"}};
  const auto run_verify = [&](const std::string& name) {
    KeyValueConfig local = kv;
    local.values["out"] = (root / name).string();
    std::ostringstream log;
    return cli::cmd_verify(RunConfig::from_key_values(local), log);
  };
  const int rc1 = run_verify("a");
  const int rc2 = run_verify("b");

  const auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string d1 = slurp(root / "a" / "diagnostics.csv");
  const std::string d2 = slurp(root / "b" / "diagnostics.csv");
  const bool identical = !d1.empty() && d1 == d2;

  std::ostringstream ss;
  ss << "verify exit codes " << rc1 << "/" << rc2 << "; diagnostics CSVs "
     << (identical ? "byte-identical" : "DIFFER");
  report(10, "determinism", rc1 == 0 && rc2 == 0 && identical, ss.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures);
  return g_failures;
}
