#pragma once

#include <vector>

#include "gbflow/sigma.hpp"

namespace gbflow {

// Uniform periodic grid on the unit circle T = R/Z. dx is stored implicitly
// as 1/n so that n*dx = 1 holds exactly; indexing is cyclic mod n.
struct Grid1D {
  int n = 0;

  explicit Grid1D(int n);
  double dx() const { return 1.0 / n; }
  double x(int i) const { return static_cast<double>(i) / n; }
};

// Periodic graph height samples plus the misorientation scalar.
struct GraphState {
  Grid1D grid{8};
  std::vector<double> u;
  double alpha = 0.0;
  double t = 0.0;
};

// Centered first difference (u_{i+1} - u_{i-1}) / (2 dx), periodic wrap.
std::vector<double> d1(const std::vector<double>& u, const Grid1D& grid);

// Area element v = sqrt(1 + u_x^2); v >= 1 pointwise.
std::vector<double> area_element(const std::vector<double>& u, const Grid1D& grid);

// Curvature in conservative form kappa = d1(u_x / v). The flux form keeps
// the discrete length-dissipation identity at quadrature accuracy through
// summation by parts.
std::vector<double> curvature(const std::vector<double>& u, const Grid1D& grid);

// |Gamma| = integral of v over one period, rectangle rule.
double curve_length(const std::vector<double>& u, const Grid1D& grid);

// E = sigma(alpha) * |Gamma|.
double energy(const GraphState& state, const SigmaModel& model);

struct SobolevNorms {
  double h1 = 0.0;  // ||u_x||_2^2
  double h2 = 0.0;  // ||u_xx||_2^2
  double h3 = 0.0;  // ||u_xxx||_2^2
};

// Squared L2 norms of the first three periodic derivatives, each built by
// composing the centered stencil.
SobolevNorms sobolev_norms(const std::vector<double>& u, const Grid1D& grid);

}  // namespace gbflow
