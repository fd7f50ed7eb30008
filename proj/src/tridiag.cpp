#include "gbflow/tridiag.hpp"

#include <cmath>

#include "gbflow/errors.hpp"

namespace gbflow {

namespace {
constexpr double kPivotFloor = 1e-14;
}

std::vector<double> solve_tridiagonal(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& c,
                                      const std::vector<double>& r) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || r.size() != n)
    throw ConfigError("tridiagonal solve: band size mismatch");
  if (n == 0) return {};

  std::vector<double> cp(n), x(n);
  double pivot = b[0];
  if (std::abs(pivot) < kPivotFloor)
    throw SingularSystemError("tridiagonal solve: pivot below 1e-14");
  cp[0] = c[0] / pivot;
  x[0] = r[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = b[i] - a[i] * cp[i - 1];
    if (std::abs(pivot) < kPivotFloor)
      throw SingularSystemError("tridiagonal solve: pivot below 1e-14");
    cp[i] = c[i] / pivot;
    x[i] = (r[i] - a[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& r) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || r.size() != n)
    throw ConfigError("cyclic tridiagonal solve: band size mismatch");
  if (n < 3) throw ConfigError("cyclic tridiagonal solve needs n >= 3");

  // A = T' + u v^T with u = (gamma, 0, ..., 0, c[n-1]),
  // v = (1, 0, ..., 0, a[0]/gamma); T' is A with the corners folded into
  // the first and last diagonal entries.
  const double gamma = -b[0];
  if (std::abs(gamma) < kPivotFloor)
    throw SingularSystemError("cyclic tridiagonal solve: corner pivot below 1e-14");

  std::vector<double> bm = b;
  bm[0] = b[0] - gamma;
  bm[n - 1] = b[n - 1] - a[0] * c[n - 1] / gamma;

  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = c[n - 1];

  const std::vector<double> y = solve_tridiagonal(a, bm, c, r);
  const std::vector<double> z = solve_tridiagonal(a, bm, c, u);

  const double vy = y[0] + a[0] * y[n - 1] / gamma;
  const double vz = z[0] + a[0] * z[n - 1] / gamma;
  const double denom = 1.0 + vz;
  if (std::abs(denom) < kPivotFloor)
    throw SingularSystemError("cyclic tridiagonal solve: rank-1 denominator below 1e-14");
  const double fact = vy / denom;

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - fact * z[i];
  return x;
}

}  // namespace gbflow
