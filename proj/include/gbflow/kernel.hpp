#pragma once

#include <vector>

#include "gbflow/graph_solver.hpp"
#include "gbflow/vec2.hpp"

namespace gbflow {

// Sampled conductivity schedule t -> sigma(alpha(t)) with its running
// integral. The integral is a trapezoid prefix-sum table with linear
// interpolation between nodes, matching the solver's time grid so the
// kernel never needs a second quadrature grid.
struct SigmaSchedule {
  std::vector<double> t;
  std::vector<double> sigma;
  std::vector<double> integral;  // trapezoid prefix sums, integral[0] = 0

  static SigmaSchedule from_samples(std::vector<double> t, std::vector<double> sigma);
  static SigmaSchedule from_trajectory(const Trajectory& traj, const SigmaModel& model);
  static SigmaSchedule constant(double sigma, double t_begin, double t_end, int samples = 2);

  double t_min() const { return t.front(); }
  double t_max() const { return t.back(); }
  // Linear interpolation of the sigma samples. Range-checked.
  double sigma_at(double time) const;
  // Linear interpolation of the prefix-sum table. Range-checked.
  double integral_at(double time) const;
  // Centered three-point slope of the integral table, the schedule's own
  // estimate of d/dt integral. Interpolated between nodes; one-sided at the
  // ends. Agrees with sigma_at to the trapezoid order O(dt^2).
  double rate_at(double time) const;

 private:
  std::size_t bracket(double time) const;
  std::vector<double> node_rate;
};

// Backward heat kernel rho_{(X0,t0)} with time-dependent conductivity
// k'(t) = mu sigma(alpha(t)):
//   rho(X, t) = (4 pi tau)^{-1/2} exp(-|X-X0|^2 / (4 tau)),
//   tau = Sigma(t0) - Sigma(t),  Sigma(t) = mu int_0^t sigma(alpha).
// The 1/2 normalization exponent is the codimension-one (planar curve)
// convention of the weighted monotonicity functional.
struct BackwardKernel {
  Vec2 x0;
  double t0 = 0.0;
  SigmaSchedule schedule;
  double mu = 1.0;

  BackwardKernel(Vec2 x0, double t0, SigmaSchedule schedule, double mu);

  // Sigma(t), range error outside the sampled schedule.
  double sigma_accum(double t) const;
  // Sigma(t0) - Sigma(t); enforces t < t0 strictly and a 1e-12 guard band.
  double tau(double t) const;

  double rho(const Vec2& X, double t) const;
  Vec2 grad_rho(const Vec2& X, double t) const;
  SymMat2 hess_rho(const Vec2& X, double t) const;
  // Analytic time derivative, with k'(t) taken from the schedule's own
  // integral table (rate_at) so the residual below measures the trapezoid
  // consistency of Sigma.
  double rho_t(const Vec2& X, double t) const;

  // |rho_t + mu sigma (D rho . a)^2 / rho + mu sigma (I - a x a) : D^2 rho|
  // for unit a. Zero analytically; O(dt^2) in the schedule spacing for a
  // trapezoid Sigma over a smooth schedule.
  double identity_residual(const Vec2& X, double t, const Vec2& a) const;
};

}  // namespace gbflow
