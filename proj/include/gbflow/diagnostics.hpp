#pragma once

#include <string>
#include <vector>

#include "gbflow/graph_solver.hpp"
#include "gbflow/kernel.hpp"
#include "gbflow/sigma.hpp"

namespace gbflow {

// Admissible weights for the monotonicity functional: both choices are
// periodic functions of u_x (or constants), hence admissible on T.
enum class WeightFunction { One, AreaElement };

struct CheckReport {
  std::string name;
  bool applicable = true;
  bool passed = false;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  double location = 0.0;  // time of the worst violation
  std::string note;

  static CheckReport not_applicable(std::string name, std::string why);
};

struct SeriesCheck {
  std::vector<double> t;
  std::vector<double> value;
  CheckReport report;
};

// Defect of the free-energy dissipation identity
//   dE/dt = -(1/gamma)|alpha_t|^2 - (1/mu) int (u_t/v)^2 v dx
// over uniformly spaced snapshots: dE/dt and alpha_t by centered
// differences at interior snapshots, u_t by the forward difference
// (u^{n+1}-u^n)/dt divided by v^n. Needs >= 3 snapshots.
SeriesCheck dissipation_residual(const Trajectory& traj, const SigmaModel& model,
                                 const Params& params);

// Weighted monotonicity functional M(t) = int_Gamma f rho sigma(alpha(t)),
// with rho the backward kernel centered at X0 = (x0, u(x0, t0)). Checks the
// forward differences stay below eps_mono = 1e-4 * M(first) per unit time.
// Evaluation stops a guard band before t0 (kernel quadrature) and the
// caller should keep Sigma(t0) - Sigma(0) small: the kernel is a plane
// Gaussian, so mass leaking past one period re-enters the window as an
// artificial increase once sqrt(tau) becomes comparable to the period.
SeriesCheck monotonicity_series(const Trajectory& traj, const SigmaModel& model,
                                const Params& params, double x0, double t0,
                                WeightFunction f);

// The a priori bounds, one report each, gated on the model's flags:
//   max_principle     (A1)     sup_t sup_x |u| <= sup |u0| + 1e-10
//   misorientation    (A2)     |alpha(t)| <= |alpha0| + 1e-12
//   length_monotone   (always) |Gamma_t| <= |Gamma_0| + 1e-10
//   gradient_estimate (A1)     sup_t sup v <= sigma(alpha0)/C1 * (sup v0)^2
std::vector<CheckReport> bound_checks(const Trajectory& traj, const SigmaModel& model);

// Defect of d|Gamma|/dt + mu sigma(alpha) int kappa^2 v dx = 0 over
// snapshots. The integrand pairs the conservative-form curvature with the
// compact-stencil one actually driving the scheme; under that pairing the
// semidiscrete identity is exact by summation by parts, so the residual
// measures pure time discretization.
SeriesCheck length_dissipation_check(const Trajectory& traj, const SigmaModel& model,
                                     const Params& params);

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Least-squares slope of log y against t inside [t_a, t_b]; rate = -slope.
// Needs >= 10 points, all positive.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& y,
                   double t_a, double t_b);

struct AsymptoticsReport {
  std::string status;  // "ok" or "inconclusive"
  double u_infinity = 0.0;
  double final_spread = 0.0;
  double final_sup_deviation = 0.0;  // sup |u - u_infinity| at final time
  double final_sup_ux = 0.0;
  double final_sup_kappa = 0.0;
  DecayFit rate_deviation;
  DecayFit rate_ux;
  DecayFit rate_kappa;
};

// Estimates the flat limit u_infinity as the final spatial mean and fits
// tail-window decay rates for sup|u - u_infinity|, sup|u_x|, sup|kappa|.
// Status is "inconclusive" when the run is too short (final sup|kappa|
// >= 1e-6) or the final state is not constant to 1e-6 spread.
AsymptoticsReport asymptotics_report(const Trajectory& traj);

}  // namespace gbflow
