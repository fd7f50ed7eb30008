#include "gbflow/sigma.hpp"

#include <cmath>
#include <utility>

#include "gbflow/errors.hpp"

namespace gbflow {

double SigmaModel::eval(double alpha) const {
  switch (kind) {
    case SigmaKind::QuadraticShifted:
      return 1.0 + 0.5 * alpha * alpha;
    case SigmaKind::Quadratic:
      return 0.5 * alpha * alpha;
    case SigmaKind::Custom:
      if (!value) throw ConfigError("custom sigma model has no value callable");
      return value(alpha);
  }
  throw ConfigError("unreachable sigma kind");
}

double SigmaModel::deriv(double alpha) const {
  switch (kind) {
    case SigmaKind::QuadraticShifted:
    case SigmaKind::Quadratic:
      return alpha;
    case SigmaKind::Custom:
      if (!derivative)
        throw ConfigError("custom sigma model has no derivative callable");
      return derivative(alpha);
  }
  throw ConfigError("unreachable sigma kind");
}

SigmaModel SigmaModel::quadratic_shifted() {
  SigmaModel m;
  m.kind = SigmaKind::QuadraticShifted;
  m.c_lower = 1.0;
  m.satisfies_A1 = true;
  m.satisfies_A2 = true;
  return m;
}

SigmaModel SigmaModel::quadratic() {
  SigmaModel m;
  m.kind = SigmaKind::Quadratic;
  m.c_lower = 0.0;
  m.satisfies_A1 = false;
  m.satisfies_A2 = true;
  return m;
}

SigmaModel SigmaModel::custom(std::function<double(double)> value,
                              std::function<double(double)> derivative,
                              double c_lower, bool a1, bool a2) {
  if (!value || !derivative)
    throw ConfigError("custom sigma model requires value and derivative callables");
  if (c_lower < 0.0) throw ConfigError("sigma c_lower must be nonnegative");
  SigmaModel m;
  m.kind = SigmaKind::Custom;
  m.value = std::move(value);
  m.derivative = std::move(derivative);
  m.c_lower = c_lower;
  m.satisfies_A1 = a1;
  m.satisfies_A2 = a2;
  spot_check_assumptions(m);
  return m;
}

SigmaModel SigmaModel::from_name(const std::string& name) {
  if (name == "quadratic_shifted") return quadratic_shifted();
  if (name == "quadratic") return quadratic();
  throw ConfigError("unknown sigma model kind: \"" + name + "\"");
}

void spot_check_assumptions(const SigmaModel& model, int samples) {
  if (samples < 2) throw ConfigError("spot check needs at least 2 samples");
  const double lo = -10.0, hi = 10.0;
  for (int i = 0; i < samples; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    const double s = model.eval(a);
    if (!std::isfinite(s)) throw ConfigError("sigma(alpha) is not finite on sample grid");
    if (model.satisfies_A1) {
      if (model.c_lower <= 0.0)
        throw ConfigError("A1 declared but c_lower is not positive");
      if (s < model.c_lower)
        throw ConfigError("A1 violated on sample grid: sigma(alpha) < c_lower");
    }
    if (model.satisfies_A2 && a * model.deriv(a) < -1e-12)
      throw ConfigError("A2 violated on sample grid: alpha*sigma_alpha(alpha) < 0");
  }
}

double AnisotropicSigma::eval(double theta, double alpha) const {
  if (!value) throw ConfigError("anisotropic sigma has no value callable");
  return value(theta, alpha);
}

AnisotropicSigma AnisotropicSigma::lift(SigmaModel model) {
  AnisotropicSigma a;
  a.isotropic = true;
  a.value = [model](double, double alpha) { return model.eval(alpha); };
  a.d_theta = [](double, double) { return 0.0; };
  a.d_theta2 = [](double, double) { return 0.0; };
  a.d_alpha = [model](double, double alpha) { return model.deriv(alpha); };
  return a;
}

double stiffness(const AnisotropicSigma& model, double theta, double alpha) {
  if (!model.d_theta2)
    throw ConfigError("anisotropic sigma has no second theta-derivative");
  return model.d_theta2(theta, alpha) + model.eval(theta, alpha);
}

}  // namespace gbflow
