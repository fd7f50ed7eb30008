#include "gbflow/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "gbflow/errors.hpp"

namespace gbflow {

SigmaSchedule SigmaSchedule::from_samples(std::vector<double> t,
                                          std::vector<double> sigma) {
  if (t.size() != sigma.size() || t.size() < 2)
    throw ConfigError("sigma schedule needs >= 2 matching samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw ConfigError("sigma schedule times must be strictly increasing");

  SigmaSchedule s;
  s.t = std::move(t);
  s.sigma = std::move(sigma);
  s.integral.resize(s.t.size());
  s.integral[0] = 0.0;
  for (std::size_t i = 1; i < s.t.size(); ++i)
    s.integral[i] = s.integral[i - 1] +
                    0.5 * (s.sigma[i] + s.sigma[i - 1]) * (s.t[i] - s.t[i - 1]);

  s.node_rate.resize(s.t.size());
  const std::size_t m = s.t.size();
  s.node_rate[0] = (s.integral[1] - s.integral[0]) / (s.t[1] - s.t[0]);
  for (std::size_t i = 1; i + 1 < m; ++i)
    s.node_rate[i] =
        (s.integral[i + 1] - s.integral[i - 1]) / (s.t[i + 1] - s.t[i - 1]);
  s.node_rate[m - 1] =
      (s.integral[m - 1] - s.integral[m - 2]) / (s.t[m - 1] - s.t[m - 2]);
  return s;
}

SigmaSchedule SigmaSchedule::from_trajectory(const Trajectory& traj,
                                             const SigmaModel& model) {
  std::vector<double> t, sigma;
  t.reserve(traj.rows.size());
  sigma.reserve(traj.rows.size());
  for (const DiagnosticsRow& row : traj.rows) {
    t.push_back(row.t);
    sigma.push_back(model.eval(row.alpha));
  }
  return from_samples(std::move(t), std::move(sigma));
}

SigmaSchedule SigmaSchedule::constant(double sigma, double t_begin, double t_end,
                                      int samples) {
  if (samples < 2) throw ConfigError("constant schedule needs >= 2 samples");
  std::vector<double> t(samples), s(samples, sigma);
  for (int i = 0; i < samples; ++i)
    t[i] = t_begin + (t_end - t_begin) * static_cast<double>(i) / (samples - 1);
  return from_samples(std::move(t), std::move(s));
}

std::size_t SigmaSchedule::bracket(double time) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t.back()));
  if (time < t.front() - slack || time > t.back() + slack)
    throw DomainError("time " + std::to_string(time) +
                      " outside sampled schedule range [" +
                      std::to_string(t.front()) + ", " + std::to_string(t.back()) +
                      "]");
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t hi = static_cast<std::size_t>(it - t.begin());
  hi = std::clamp<std::size_t>(hi, 1, t.size() - 1);
  return hi - 1;
}

double SigmaSchedule::sigma_at(double time) const {
  const std::size_t j = bracket(time);
  const double w = (time - t[j]) / (t[j + 1] - t[j]);
  return sigma[j] + w * (sigma[j + 1] - sigma[j]);
}

double SigmaSchedule::integral_at(double time) const {
  const std::size_t j = bracket(time);
  const double w = (time - t[j]) / (t[j + 1] - t[j]);
  return integral[j] + w * (integral[j + 1] - integral[j]);
}

double SigmaSchedule::rate_at(double time) const {
  const std::size_t j = bracket(time);
  const double w = (time - t[j]) / (t[j + 1] - t[j]);
  return node_rate[j] + w * (node_rate[j + 1] - node_rate[j]);
}

BackwardKernel::BackwardKernel(Vec2 x0, double t0, SigmaSchedule schedule,
                               double mu)
    : x0(x0), t0(t0), schedule(std::move(schedule)), mu(mu) {
  if (!(mu > 0.0)) throw ConfigError("kernel mu must be positive");
  if (!(t0 > 0.0)) throw ConfigError("kernel t0 must be positive");
  if (t0 > this->schedule.t_max() + 1e-12)
    throw ConfigError("kernel t0 lies beyond the sampled schedule");
}

double BackwardKernel::sigma_accum(double t) const {
  return mu * schedule.integral_at(t);
}

double BackwardKernel::tau(double t) const {
  if (!(t < t0))
    throw DomainError("backward kernel undefined at or after t0");
  const double value = sigma_accum(t0) - sigma_accum(t);
  if (value < 1e-12)
    throw DomainError("Sigma(t0) - Sigma(t) below the 1e-12 guard band");
  return value;
}

double BackwardKernel::rho(const Vec2& X, double t) const {
  const double tv = tau(t);
  const double r2 = (X - x0).norm2();
  return std::exp(-r2 / (4.0 * tv)) / std::sqrt(4.0 * std::numbers::pi * tv);
}

Vec2 BackwardKernel::grad_rho(const Vec2& X, double t) const {
  const double tv = tau(t);
  return (X - x0) * (-rho(X, t) / (2.0 * tv));
}

SymMat2 BackwardKernel::hess_rho(const Vec2& X, double t) const {
  const double tv = tau(t);
  const double p = rho(X, t);
  const Vec2 d = X - x0;
  const double q = p / (4.0 * tv * tv);
  SymMat2 h;
  h.xx = -p / (2.0 * tv) + q * d.x * d.x;
  h.xy = q * d.x * d.y;
  h.yy = -p / (2.0 * tv) + q * d.y * d.y;
  return h;
}

double BackwardKernel::rho_t(const Vec2& X, double t) const {
  const double tv = tau(t);
  const double p = rho(X, t);
  const double r2 = (X - x0).norm2();
  const double k_rate = mu * schedule.rate_at(t);
  return k_rate * (p / (2.0 * tv) - p * r2 / (4.0 * tv * tv));
}

double BackwardKernel::identity_residual(const Vec2& X, double t,
                                         const Vec2& a) const {
  if (std::abs(a.norm() - 1.0) > 1e-12)
    throw ConfigError("identity direction must be a unit vector");
  const double p = rho(X, t);
  const Vec2 g = grad_rho(X, t);
  const SymMat2 h = hess_rho(X, t);
  const double sigma = mu * schedule.sigma_at(t);
  const double ga = g.dot(a);
  SymMat2 proj;  // I - a x a
  proj.xx = 1.0 - a.x * a.x;
  proj.xy = -a.x * a.y;
  proj.yy = 1.0 - a.y * a.y;
  return std::abs(rho_t(X, t) + sigma * ga * ga / p + sigma * proj.contract(h));
}

}  // namespace gbflow
