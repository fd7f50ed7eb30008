#pragma once

#include <vector>

namespace gbflow {

// Solves the tridiagonal system
//   a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = r[i],  i = 0..n-1
// with a[0] and c[n-1] ignored. Thomas algorithm without pivoting; throws
// SingularSystemError when a pivot falls below 1e-14 in magnitude.
std::vector<double> solve_tridiagonal(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& c,
                                      const std::vector<double>& r);

// Same system with cyclic wrap: a[0] couples x[n-1] and c[n-1] couples x[0].
// Sherman-Morrison rank-1 correction of two plain Thomas solves.
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& r);

}  // namespace gbflow
