#include "gbflow/geometry.hpp"

#include <cmath>

#include "gbflow/errors.hpp"

namespace gbflow {

Grid1D::Grid1D(int n) : n(n) {
  if (n < 8) throw ConfigError("grid needs at least 8 points");
}

std::vector<double> d1(const std::vector<double>& u, const Grid1D& grid) {
  const int n = grid.n;
  if (static_cast<int>(u.size()) != n)
    throw ConfigError("sample count does not match grid");
  std::vector<double> out(n);
  const double inv2dx = 0.5 * n;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1 == n) ? 0 : i + 1;
    const int im = (i == 0) ? n - 1 : i - 1;
    out[i] = (u[ip] - u[im]) * inv2dx;
  }
  return out;
}

std::vector<double> area_element(const std::vector<double>& u, const Grid1D& grid) {
  std::vector<double> v = d1(u, grid);
  for (double& w : v) w = std::sqrt(1.0 + w * w);
  return v;
}

std::vector<double> curvature(const std::vector<double>& u, const Grid1D& grid) {
  std::vector<double> flux = d1(u, grid);
  for (double& w : flux) w /= std::sqrt(1.0 + w * w);
  return d1(flux, grid);
}

double curve_length(const std::vector<double>& u, const Grid1D& grid) {
  const std::vector<double> v = area_element(u, grid);
  double sum = 0.0;
  for (double w : v) sum += w;
  return sum * grid.dx();
}

double energy(const GraphState& state, const SigmaModel& model) {
  return model.eval(state.alpha) * curve_length(state.u, state.grid);
}

namespace {
double l2_squared(const std::vector<double>& w, double dx) {
  double sum = 0.0;
  for (double x : w) sum += x * x;
  return sum * dx;
}
}  // namespace

SobolevNorms sobolev_norms(const std::vector<double>& u, const Grid1D& grid) {
  SobolevNorms out;
  const double dx = grid.dx();
  std::vector<double> w = d1(u, grid);
  out.h1 = l2_squared(w, dx);
  w = d1(w, grid);
  out.h2 = l2_squared(w, dx);
  w = d1(w, grid);
  out.h3 = l2_squared(w, dx);
  return out;
}

}  // namespace gbflow
