#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ddm {

struct NelderMeadOptions {
  double f_tol = 1e-6;   // spread of simplex values
  double x_tol = 1e-6;   // largest vertex distance from the best vertex
  int max_iterations = 2000;
  int restarts = 1;      // rebuild the simplex around the optimum this many times
  std::vector<double> initial_step;  // per coordinate; default 0.1 each
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Adaptive coefficients (Gao & Han) when dimension > 2, classic ones otherwise.
// NaN objective values are treated as +inf.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt = {});

// Expands [lo, hi] geometrically until g(lo) and g(hi) have opposite signs.
// Throws std::runtime_error after max_expansions.
std::pair<double, double> expand_sign_bracket(const std::function<double(double)>& g, double lo, double hi,
                                              int max_expansions = 60);

}  // namespace ddm
