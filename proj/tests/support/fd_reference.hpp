#pragma once

// Richardson-extrapolated central differences used as a derivative oracle.

#include <cmath>

namespace cmc::fixtures {

struct FdReference {
  double d1 = 0.0;
  double d2 = 0.0;
  /// Two extrapolation levels agree to within `agreement`; otherwise the step
  /// does not resolve the function and the reference says nothing.
  bool resolved = false;
};

template <class Fn>
FdReference fd_reference(Fn&& f, double u, double tol, double h = 2e-3) {
  const double f0 = f(u);
  auto level = [&](double s, double& d1, double& d2) {
    const double p = f(u + s), m = f(u - s), p2 = f(u + s / 2), m2 = f(u - s / 2);
    const double a1 = (p - m) / (2 * s), b1 = (p2 - m2) / s;
    const double a2 = (p - 2 * f0 + m) / (s * s), b2 = 4 * (p2 - 2 * f0 + m2) / (s * s);
    d1 = (4 * b1 - a1) / 3;
    d2 = (4 * b2 - a2) / 3;
  };
  FdReference coarse, fine;
  level(h, coarse.d1, coarse.d2);
  level(h / 2, fine.d1, fine.d2);
  const double agreement = 0.1 * tol;
  fine.resolved = std::abs(coarse.d1 - fine.d1) <= agreement * (1 + std::abs(fine.d1)) &&
                  std::abs(coarse.d2 - fine.d2) <= agreement * (1 + std::abs(fine.d2));
  return fine;
}

}  // namespace cmc::fixtures
