#pragma once

#include <functional>
#include <string>

namespace gbflow {

enum class SigmaKind { QuadraticShifted, Quadratic, Custom };

// Interfacial energy density sigma(alpha) with its analytic derivative and
// the two structural assumptions the bound checks rely on:
//   A1: sigma(alpha) >= c_lower > 0 for all alpha (uniform positivity)
//   A2: alpha * sigma_alpha(alpha) >= 0           (odd-sign derivative)
//
// Built-ins:
//   QuadraticShifted  sigma = 1 + alpha^2/2   (c_lower = 1, A1 + A2)
//   Quadratic         sigma = alpha^2/2       (c_lower = 0, A2 only)
//
// Custom models carry user callables for value and derivative; the solvers
// never differentiate a user sigma numerically, so the ODE right-hand side
// stays exactly consistent with the dissipation identity being tested.
struct SigmaModel {
  SigmaKind kind = SigmaKind::Custom;
  double c_lower = 0.0;
  bool satisfies_A1 = false;
  bool satisfies_A2 = false;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  double eval(double alpha) const;
  double deriv(double alpha) const;

  static SigmaModel quadratic_shifted();
  static SigmaModel quadratic();
  // Flags are declared by the caller and spot-validated on a sample grid.
  static SigmaModel custom(std::function<double(double)> value,
                           std::function<double(double)> derivative,
                           double c_lower, bool a1, bool a2);
  // Config-file kind strings: "quadratic_shifted", "quadratic".
  static SigmaModel from_name(const std::string& name);
};

// Samples alpha on a uniform grid over [-10, 10] and checks the declared
// A1/A2 flags hold there. Throws ConfigError naming the failed assumption.
// A1/A2 are global statements; sampling is the testable surrogate.
void spot_check_assumptions(const SigmaModel& model, int samples = 1000);

// Energy density sigma(theta, alpha) depending on the polar angle theta of
// the curve normal. 2pi-periodic in theta. Carries analytic theta- and
// alpha-derivatives as callables.
struct AnisotropicSigma {
  std::function<double(double, double)> value;     // sigma(theta, alpha)
  std::function<double(double, double)> d_theta;   // sigma_theta
  std::function<double(double, double)> d_theta2;  // sigma_thetatheta
  std::function<double(double, double)> d_alpha;   // sigma_alpha
  bool isotropic = false;  // true when lifted from a SigmaModel

  double eval(double theta, double alpha) const;

  // Theta-independent lift of an isotropic model.
  static AnisotropicSigma lift(SigmaModel model);
};

// Line-tension stiffness sigma_thetatheta + sigma, the mobility factor of
// the anisotropic normal velocity law.
double stiffness(const AnisotropicSigma& model, double theta, double alpha);

}  // namespace gbflow
