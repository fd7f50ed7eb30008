#include "gbflow/graph_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gbflow/errors.hpp"
#include "gbflow/tridiag.hpp"

namespace gbflow {

namespace {

void validate_params(const Params& p) {
  if (!(p.mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(p.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(p.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(p.cfl_safety > 0.0 && p.cfl_safety <= 1.0))
    throw ConfigError("cfl_safety must lie in (0, 1]");
}

// Heun update of alpha' = -gamma sigma_alpha(alpha) |Gamma|, length frozen.
double advance_alpha(double alpha, double length, double dt, const Params& p,
                     const SigmaModel& model) {
  const double s0 = model.deriv(alpha);
  const double predictor = alpha - dt * p.gamma * s0 * length;
  const double s1 = model.deriv(predictor);
  return alpha - 0.5 * dt * p.gamma * (s0 + s1) * length;
}

DiagnosticsRow make_row(const GraphState& state, const SigmaModel& model,
                        double residual) {
  DiagnosticsRow row;
  row.t = state.t;
  row.alpha = state.alpha;
  const std::vector<double> v = area_element(state.u, state.grid);
  double length = 0.0, sup_v = 0.0, sup_u = 0.0;
  for (double w : v) {
    length += w;
    sup_v = std::max(sup_v, w);
  }
  for (double w : state.u) sup_u = std::max(sup_u, std::abs(w));
  row.length = length * state.grid.dx();
  row.sup_v = sup_v;
  row.sup_u = sup_u;
  row.energy = model.eval(state.alpha) * row.length;
  const SobolevNorms norms = sobolev_norms(state.u, state.grid);
  row.h1 = norms.h1;
  row.h2 = norms.h2;
  row.h3 = norms.h3;
  double sup_kappa = 0.0;
  for (double k : curvature(state.u, state.grid))
    sup_kappa = std::max(sup_kappa, std::abs(k));
  row.sup_kappa = sup_kappa;
  row.dissipation_residual = residual;
  return row;
}

// Step-local defect of dE/dt = -(1/gamma)|alpha_t|^2 - (1/mu) int (u_t/v)^2 v.
double step_residual(const GraphState& before, const GraphState& after,
                     const Params& p, const SigmaModel& model) {
  const double dt = after.t - before.t;
  const Grid1D& grid = before.grid;
  const double e0 = energy(before, model);
  const double e1 = energy(after, model);
  const double alpha_dot = (after.alpha - before.alpha) / dt;
  const std::vector<double> v = area_element(before.u, grid);
  double flow = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double u_dot = (after.u[i] - before.u[i]) / dt;
    flow += u_dot * u_dot / v[i];
  }
  flow *= grid.dx();
  return std::abs((e1 - e0) / dt + alpha_dot * alpha_dot / p.gamma + flow / p.mu);
}

}  // namespace

double stable_dt(const GraphState& state, const Params& params,
                 const SigmaModel& model) {
  const double sigma = model.eval(state.alpha);
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  const double dx = state.grid.dx();
  return params.cfl_safety * dx * dx / (params.mu * sigma);
}

GraphState step(const GraphState& state, const Params& params,
                const SigmaModel& model) {
  validate_params(params);
  const Grid1D& grid = state.grid;
  const int n = grid.n;
  if (static_cast<int>(state.u.size()) != n)
    throw ConfigError("state sample count does not match grid");
  const double dt = params.dt;

  const double length = curve_length(state.u, grid);
  const double alpha_next = advance_alpha(state.alpha, length, dt, params, model);
  const double alpha_half = 0.5 * (state.alpha + alpha_next);
  const double sigma = model.eval(alpha_half);

  GraphState next;
  next.grid = grid;
  next.alpha = alpha_next;
  next.t = state.t + dt;

  if (sigma == 0.0) {
    next.u = state.u;
    return next;
  }

  const std::vector<double> ux = d1(state.u, grid);
  const double inv_dx2 = static_cast<double>(n) * static_cast<double>(n);
  std::vector<double> sub(n), diag(n), sup(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    const int im = (i == 0) ? n - 1 : i - 1;
    const double coeff = params.mu * sigma / (1.0 + ux[i] * ux[i]) * inv_dx2;
    const double theta = 0.5 * dt * coeff;
    sub[i] = -theta;
    diag[i] = 1.0 + 2.0 * theta;
    sup[i] = -theta;
    rhs[i] = dt * coeff * (state.u[ip] - 2.0 * state.u[i] + state.u[im]);
  }
  const std::vector<double> delta = solve_cyclic_tridiagonal(sub, diag, sup, rhs);

  next.u.resize(n);
  for (int i = 0; i < n; ++i) next.u[i] = state.u[i] + delta[i];
  for (double w : next.u)
    if (!std::isfinite(w))
      throw DivergenceError("non-finite sample after u-update at t = " +
                                std::to_string(next.t),
                            0, next.t);
  if (!std::isfinite(next.alpha))
    throw DivergenceError("non-finite alpha after misorientation update at t = " +
                              std::to_string(next.t),
                          0, next.t);
  return next;
}

Trajectory run(const std::vector<double>& u0, double alpha0, const Grid1D& grid,
               const Params& params, const SigmaModel& model,
               std::size_t snapshot_every) {
  validate_params(params);
  if (params.t_end < 0.0) throw ConfigError("t_end must be nonnegative");
  if (snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
  if (static_cast<int>(u0.size()) != grid.n)
    throw ConfigError("initial sample count does not match grid");
  for (double w : u0)
    if (!std::isfinite(w)) throw ConfigError("initial data is not finite");

  GraphState state{grid, u0, alpha0, 0.0};
  Trajectory traj;
  traj.grid = grid;
  traj.params = params;
  traj.rows.push_back(make_row(state, model, 0.0));
  traj.snapshots.push_back({0, state.t, state.alpha, state.u});

  const double t_tol = 1e-12 * std::max(1.0, params.t_end);
  std::size_t step_idx = 0;
  while (state.t < params.t_end - t_tol) {
    Params local = params;
    double dt = params.dt;
    if (!params.force_dt) dt = std::min(dt, stable_dt(state, params, model));
    dt = std::min(dt, params.t_end - state.t);
    if (!(dt > 0.0) || state.t + dt == state.t)
      throw ConfigError("step size collapsed to zero; check the sigma model");
    local.dt = dt;

    GraphState next;
    try {
      next = step(state, local, model);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " (step " +
                                std::to_string(step_idx + 1) + ")",
                            step_idx + 1, state.t + dt);
    }
    ++step_idx;
    traj.rows.push_back(
        make_row(next, model, step_residual(state, next, params, model)));
    if (step_idx % snapshot_every == 0)
      traj.snapshots.push_back({step_idx, next.t, next.alpha, next.u});
    state = std::move(next);
  }

  if (traj.snapshots.back().step != step_idx)
    traj.snapshots.push_back({step_idx, state.t, state.alpha, state.u});
  return traj;
}

}  // namespace gbflow
