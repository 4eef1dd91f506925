#include "ddm/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <vector>

namespace ddm {
namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk21(const Integrand& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& x = Kronrod::abscissa();  // x[0] = 0, Gauss nodes at odd indices
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kronrod = wk[0] * f0;
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = half * x[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += wk[i] * pair;
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, double abs_tol, int max_intervals) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel> heap;
  Panel first = gk21(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int count = 1;
  while (err > abs_tol && count < max_intervals) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;  // interval no longer divisible in double precision
    }
    Panel left = gk21(f, worst.a, mid);
    Panel right = gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum from the panels so the running updates do not accumulate rounding.
  total = 0.0;
  err = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  for (auto it = panels.rbegin(); it != panels.rend(); ++it) {
    total += it->value;
    err += it->error;
  }
  out.value = total;
  out.error = err;
  out.intervals = count;
  out.converged = err <= abs_tol;
  return out;
}

QuadResult integrate_to_infinity(const Integrand& f, double a, double abs_tol, int max_intervals) {
  auto mapped = [&f, a](double s) {
    const double r = 1.0 / (1.0 - s);
    const double v = s * r;  // s / (1 - s)
    const double dv = r * r;
    return f(a + v * v) * 2.0 * v * dv;
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, max_intervals);
}

QuadResult integrate_to_infinity_reciprocal(const Integrand& f, double a, double abs_tol,
                                            int max_intervals) {
  auto mapped = [&f, a](double s) {
    const double r = 1.0 / (1.0 - s);
    return f(a * r) * a * r * r;
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, max_intervals);
}

}  // namespace ddm
