#pragma once
// Reference computations for tests. These deliberately use Boost quadrature
// rather than the library's own integrator.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace oracle {

template <class F>
double finite(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q(15);
  return q.integrate(f, a, b, 1e-14);
}

template <class F>
double half_line(F f, double a) {
  boost::math::quadrature::exp_sinh<double> q(12);
  return q.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

// Levy density of the passage time of driftless unit Brownian motion over d.
inline double levy(double s, double d) {
  if (!(s > 0.0)) return 0.0;
  return std::exp(std::log(d) - 0.5 * std::log(2.0 * M_PI) - 1.5 * std::log(s) - d * d / (2.0 * s));
}

// Non-passage sub-density of X(T) for X = mu t + W(t), absorbed at b > 0
// (method of images).
inline double npd(double x, double T, double mu, double b) {
  if (x >= b) return 0.0;
  const double g = std::exp(-(x - mu * T) * (x - mu * T) / (2.0 * T)) / std::sqrt(2.0 * M_PI * T);
  return g * (1.0 - std::exp(-2.0 * b * (b - x) / T));
}

// Inverse-Gaussian-type hitting density of level b for mu t + W(t), any mu.
inline double hit(double t, double mu, double b) {
  if (!(t > 0.0)) return 0.0;
  const double e = b - mu * t;
  return std::exp(std::log(b) - 0.5 * std::log(2.0 * M_PI) - 1.5 * std::log(t) - e * e / (2.0 * t));
}

// Two-boundary hitting density at the lower boundary, large-time series,
// summed without any log-space tricks. w = (x0 - lower)/L in standard units.
inline double two_boundary_lower(double t, double x0, double mu, double sigma, double upper, double lower,
                                 int terms = 400) {
  const double L = upper - lower;
  const double y0 = x0 - lower;
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double kw = k * M_PI / L;
    s += k * std::sin(kw * y0) * std::exp(-0.5 * sigma * sigma * kw * kw * t);
  }
  const double pre = M_PI * sigma * sigma / (L * L);
  return pre * s * std::exp(-mu * y0 / (sigma * sigma) - mu * mu * t / (2.0 * sigma * sigma));
}

}  // namespace oracle
