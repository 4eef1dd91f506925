#pragma once

#include <functional>

namespace ddm {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // |Kronrod - Gauss| summed over subintervals
  int intervals = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 21-point Gauss-Kronrod on [a, b] with an absolute
// tolerance; the interval with the largest error is bisected until the
// summed error estimate drops below abs_tol.
QuadResult integrate(const Integrand& f, double a, double b, double abs_tol = 1e-10,
                     int max_intervals = 4000);

// Integral over [a, inf) via t = a + (s / (1 - s))^2, s in [0, 1). The square
// keeps integrands with t^{-3/2} tails bounded at s = 1.
QuadResult integrate_to_infinity(const Integrand& f, double a, double abs_tol = 1e-10,
                                 int max_intervals = 4000);

// Integral over [a, inf) via t = a / (1 - s), for integrands that decay at
// least like t^{-2}.
QuadResult integrate_to_infinity_reciprocal(const Integrand& f, double a, double abs_tol = 1e-10,
                                            int max_intervals = 4000);

}  // namespace ddm
