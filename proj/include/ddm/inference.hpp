#pragma once

#include "ddm/analytic.hpp"
#include "ddm/drift.hpp"
#include "ddm/optimize.hpp"
#include "ddm/piecewise.hpp"
#include "ddm/simulate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ddm {

struct EstimationResult {
  std::string method;
  std::vector<std::string> names;
  std::vector<double> estimate;
  double nll = 0.0;
  int iterations = 0;
  bool converged = false;
  // sqrt of the diagonal of the inverse finite-difference Hessian of the NLL;
  // empty when that Hessian is not positive definite
  std::optional<std::vector<double>> stderr_proxy;
};

// Single-line JSON record.
std::string to_json(const EstimationResult& r);

// (1/tau) * integral of the drift over [0, tau].
double effective_drift(const PiecewiseDrift& drift, double tau);

// ---- one-boundary switch model -------------------------------------------

double exact_nll_one_boundary(double mu, const std::vector<double>& taus, double b, double T);
double tada_nll_one_boundary(double mu, const std::vector<double>& taus, double b, double T);
// Same objective accumulated in long double, for resolving the minimiser
// beyond what a double-valued objective can.
long double tada_nll_one_boundary_ld(long double mu, const std::vector<double>& taus, double b, double T);

// Ties tau == T count in the tau <= T group.
double tada_estimator_closed_form(const std::vector<double>& taus, double b, double T);

// Almost-sure limit of the closed-form estimator under the switch model.
double asymptotic_tada_limit(const SwitchModel& m);

// Root of the summed score (the log-likelihood is strictly concave in mu).
EstimationResult mle_one_boundary(const std::vector<double>& taus, double b, double T);

// ---- two-boundary, drift alternating with the fixated option ---------------

struct Geometry {
  double x0;
  double sigma;
  double upper;
  double lower;
};

struct FitOptions {
  SolverConfig solver;
  double f_tol = 1e-6;
  double x_tol = 1e-5;
  int max_iterations = 2000;
  bool compute_stderr = true;
};

// Drift mu_a while A is fixated and mu_b while B is.
double exact_nll_alternating(double mu_a, double mu_b, const std::vector<Trial>& trials, const Geometry& g,
                             const SolverConfig& cfg);
// Constant-drift series at each trial's effective drift. Nonfinite -> +inf.
double tada_nll_alternating(double mu_a, double mu_b, const std::vector<Trial>& trials, const Geometry& g);

enum class Method { kExact, kTada };
const char* method_name(Method m);
Method parse_method(const std::string& s);

EstimationResult mle_two_boundary(const std::vector<Trial>& trials, const Geometry& g, Method method,
                                  const FitOptions& opt = {}, std::vector<double> start = {0.0, 0.0});

// ---- aDDM ------------------------------------------------------------------

double exact_nll_addm(const ADDMParams& p, const std::vector<Trial>& trials, const SolverConfig& cfg);
double tada_nll_addm(const ADDMParams& p, const std::vector<Trial>& trials);

// Nelder-Mead over (eta, log kappa, log u, logit((x0/u + 1)/2)) from three
// fixed starting points; the best converged run wins. Estimates are reported
// as (eta, kappa, u, x0).
EstimationResult fit_addm(const std::vector<Trial>& trials, Method method, const FitOptions& opt = {});

}  // namespace ddm
