#pragma once

#include <cstddef>
#include <vector>

#include "gbflow/geometry.hpp"
#include "gbflow/sigma.hpp"

namespace gbflow {

struct Params {
  double mu = 1.0;     // mobility
  double gamma = 1.0;  // misorientation relaxation rate
  double dt = 1e-4;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  // When set, the requested dt is used as-is instead of being capped by
  // stable_dt. The implicit solve stays stable; accuracy is on the caller.
  bool force_dt = false;
};

// One row per accepted step (plus the initial state).
struct DiagnosticsRow {
  double t = 0.0;
  double alpha = 0.0;
  double energy = 0.0;
  double length = 0.0;
  double sup_v = 0.0;
  double sup_u = 0.0;
  double h1 = 0.0;  // ||u_x||_2^2
  double h2 = 0.0;  // ||u_xx||_2^2
  double h3 = 0.0;  // ||u_xxx||_2^2
  double sup_kappa = 0.0;
  // Step-local defect of the free-energy dissipation identity; 0 on row 0.
  double dissipation_residual = 0.0;
};

struct GraphSnapshot {
  std::size_t step = 0;
  double t = 0.0;
  double alpha = 0.0;
  std::vector<double> u;
};

struct Trajectory {
  Grid1D grid{8};
  Params params;
  std::vector<DiagnosticsRow> rows;       // one per step + initial
  std::vector<GraphSnapshot> snapshots;   // first and last always present

  const GraphSnapshot& front() const { return snapshots.front(); }
  const GraphSnapshot& back() const { return snapshots.back(); }
  double t_end() const { return rows.back().t; }
};

// Explicit-scheme diffusive limit cfl_safety * dx^2 / (mu sigma(alpha)),
// used to cap dt for accuracy even though the scheme is implicit. Returns
// +infinity when sigma(alpha) = 0 (pure misorientation dynamics).
double stable_dt(const GraphState& state, const Params& params,
                 const SigmaModel& model);

// One step of the coupled scheme:
//   1. |Gamma^n| from u^n; Heun predictor/corrector for alpha with the
//      length frozen at t^n.
//   2. Linearly implicit Crank-Nicolson update for u in delta form,
//        (I - dt/2 A) (u^{n+1} - u^n) = dt A u^n,
//      A = mu sigma(alpha^{n+1/2}) D2 / (1 + (u_x^n)^2), D2 the periodic
//      second-difference matrix. One cyclic Thomas solve per step; the
//      delta form keeps constant states exactly stationary.
// Throws DivergenceError when the new state is not finite.
GraphState step(const GraphState& state, const Params& params,
                const SigmaModel& model);

// Integrates to params.t_end, recording a diagnostics row every step and a
// snapshot every snapshot_every steps (first and last always). dt is capped
// by stable_dt each step unless params.force_dt is set.
Trajectory run(const std::vector<double>& u0, double alpha0, const Grid1D& grid,
               const Params& params, const SigmaModel& model,
               std::size_t snapshot_every = 1);

}  // namespace gbflow
