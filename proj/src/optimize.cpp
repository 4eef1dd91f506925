#include "ddm/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ddm {
namespace {

double safe(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;

  void sort() {
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    // stable so equal values keep a fixed order
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<std::vector<double>> xs;
    std::vector<double> fs;
    for (std::size_t i : idx) {
      xs.push_back(std::move(x[i]));
      fs.push_back(f[i]);
    }
    x = std::move(xs);
    f = std::move(fs);
  }
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& func, std::vector<double> x0, const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
  std::vector<double> step = opt.initial_step;
  if (step.empty()) step.assign(n, 0.1);
  if (step.size() != n) throw std::invalid_argument("nelder_mead: initial_step has wrong size");

  const double dn = static_cast<double>(n);
  const bool adaptive = n > 2;
  const double alpha = 1.0;
  const double gamma = adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double rho = adaptive ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
  const double shrink = adaptive ? 1.0 - 1.0 / dn : 0.5;

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return safe(func(x));
  };

  std::vector<double> best = std::move(x0);
  double best_f = eval(best);
  for (int round = 0; round <= opt.restarts; ++round) {
    Simplex s;
    s.x.push_back(best);
    s.f.push_back(best_f);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v = best;
      v[i] += step[i];
      s.f.push_back(eval(v));
      s.x.push_back(std::move(v));
    }
    s.sort();

    bool done = false;
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (res.iterations < opt.max_iterations) {
      double spread = s.f.back() - s.f.front();
      double extent = 0.0;
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) extent = std::max(extent, std::fabs(s.x[i][k] - s.x[0][k]));
      }
      if (std::isfinite(s.f.front()) && spread <= opt.f_tol && extent <= opt.x_tol) {
        done = true;
        break;
      }
      ++res.iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) centroid[k] += s.x[i][k] / dn;
      }
      const std::vector<double>& worst = s.x[n];
      for (std::size_t k = 0; k < n; ++k) xr[k] = centroid[k] + alpha * (centroid[k] - worst[k]);
      const double fr = eval(xr);

      if (fr < s.f[0]) {
        for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + gamma * (xr[k] - centroid[k]);
        const double fe = eval(xe);
        if (fe < fr) {
          s.x[n] = xe;
          s.f[n] = fe;
        } else {
          s.x[n] = xr;
          s.f[n] = fr;
        }
      } else if (fr < s.f[n - 1]) {
        s.x[n] = xr;
        s.f[n] = fr;
      } else {
        const bool outside = fr < s.f[n];
        for (std::size_t k = 0; k < n; ++k) {
          xc[k] = outside ? centroid[k] + rho * (xr[k] - centroid[k]) : centroid[k] + rho * (worst[k] - centroid[k]);
        }
        const double fc = eval(xc);
        if (fc < (outside ? fr : s.f[n])) {
          s.x[n] = xc;
          s.f[n] = fc;
        } else {
          for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) s.x[i][k] = s.x[0][k] + shrink * (s.x[i][k] - s.x[0][k]);
            s.f[i] = eval(s.x[i]);
          }
        }
      }
      s.sort();
    }
    const bool moved = s.f.front() < best_f - opt.f_tol;
    best = s.x.front();
    best_f = s.f.front();
    res.converged = done;
    if (!done) break;
    // a restart that finds nothing better confirms the optimum
    if (round > 0 && !moved) break;
  }
  res.x = std::move(best);
  res.f = best_f;
  return res;
}

std::pair<double, double> expand_sign_bracket(const std::function<double(double)>& g, double lo, double hi,
                                              int max_expansions) {
  if (!(lo < hi)) throw std::invalid_argument("expand_sign_bracket: need lo < hi");
  double glo = g(lo);
  double ghi = g(hi);
  for (int i = 0; i < max_expansions; ++i) {
    if ((glo <= 0.0) != (ghi <= 0.0)) return {lo, hi};
    const double width = hi - lo;
    // walk toward the side where the sign change must lie for a decreasing g
    if (glo > 0.0 && ghi > 0.0) {
      lo = hi;
      glo = ghi;
      hi += 2.0 * width;
      ghi = g(hi);
    } else {
      hi = lo;
      ghi = glo;
      lo -= 2.0 * width;
      glo = g(lo);
    }
  }
  throw std::runtime_error("expand_sign_bracket: no sign change found");
}

}  // namespace ddm
