#include "ddm/inference.hpp"

#include "ddm/parallel.hpp"
#include "ddm/quadrature.hpp"
#include "ddm/spectral.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ddm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_taus(const std::vector<double>& taus) {
  if (taus.empty()) throw std::invalid_argument("empty dataset");
  for (double t : taus) {
    if (!(t > 0.0)) throw std::domain_error("response times must be positive");
  }
}

void require_trials(const std::vector<Trial>& trials) {
  if (trials.empty()) throw std::invalid_argument("empty dataset");
}

// Parallel map followed by a fixed-order pairwise reduction.
template <class F>
double reduce_sum(std::size_t n, F&& f) {
  std::vector<double> terms(n);
  parallel_for(n, [&](std::size_t i) { terms[i] = f(i); });
  return pairwise_sum(terms);
}

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

// Fraction of [0, tau] spent fixating A.
double fraction_a(const Trial& t) {
  double a = 0.0;
  double total = 0.0;
  for (const Fixation& f : t.fixations) {
    const double d = std::min(f.duration, t.tau - total);
    if (d <= 0.0) break;
    if (f.option == Option::kA) a += d;
    total += d;
  }
  // the recorded trajectory may stop short of tau by rounding; the last
  // fixation continues
  if (total < t.tau && !t.fixations.empty() && t.fixations.back().option == Option::kA) a += t.tau - total;
  return a / t.tau;
}

// The recorded fixations may end marginally before tau; the drift then keeps
// its last value, which PiecewiseDrift does by construction.
PiecewiseDrift alternating_drift(const Trial& t, double mu_a, double mu_b) {
  return drift_from_fixations(t.fixations, mu_a, mu_b);
}

std::optional<std::vector<double>> curvature_stderr(const Objective& f, const std::vector<double>& x) {
  const std::size_t n = x.size();
  Eigen::MatrixXd h(n, n);
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) step[i] = 1e-4 * std::max(1.0, std::fabs(x[i]));
  const double f0 = f(x);
  auto at = [&](std::size_t i, double si, std::size_t j, double sj) {
    std::vector<double> y = x;
    y[i] += si;
    y[j] += sj;
    return f(y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = (at(i, step[i], i, 0.0) - 2.0 * f0 + at(i, -step[i], i, 0.0)) / (step[i] * step[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = (at(i, step[i], j, step[j]) - at(i, step[i], j, -step[j]) - at(i, -step[i], j, step[j]) +
                        at(i, -step[i], j, -step[j])) /
                       (4.0 * step[i] * step[j]);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  if (!h.allFinite()) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(inv(i, i) > 0.0)) return std::nullopt;
    out[i] = std::sqrt(inv(i, i));
  }
  return out;
}

}  // namespace

std::string to_json(const EstimationResult& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  nlohmann::ordered_json est;
  for (std::size_t i = 0; i < r.estimate.size(); ++i) est[r.names.at(i)] = r.estimate[i];
  j["estimate"] = est;
  j["nll"] = r.nll;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  if (r.stderr_proxy) {
    nlohmann::ordered_json se;
    for (std::size_t i = 0; i < r.stderr_proxy->size(); ++i) se[r.names.at(i)] = (*r.stderr_proxy)[i];
    j["stderr_proxy"] = se;
  } else {
    j["stderr_proxy"] = nullptr;
  }
  return j.dump();
}

double effective_drift(const PiecewiseDrift& drift, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("effective_drift: tau must be positive");
  return drift.integral(tau) / tau;
}

double exact_nll_one_boundary(double mu, const std::vector<double>& taus, double b, double T) {
  require_taus(taus);
  const SwitchModel m(mu, b, T);
  return finite_or_inf(reduce_sum(taus.size(), [&](std::size_t i) { return -log_fptd_addm_switch(taus[i], m); }));
}

double tada_nll_one_boundary(double mu, const std::vector<double>& taus, double b, double T) {
  require_taus(taus);
  const SwitchModel m(mu, b, T);
  return finite_or_inf(reduce_sum(taus.size(), [&](std::size_t i) { return -log_tada_density(taus[i], m); }));
}

long double tada_nll_one_boundary_ld(long double mu, const std::vector<double>& taus, double b, double T) {
  require_taus(taus);
  const long double half_log_2pi = 0.918938533204672741780329736405617639861L;
  const long double lb = std::log(static_cast<long double>(b));
  long double sum = 0.0L;
  for (double t : taus) {
    const long double tau = t;
    const long double active = t <= T ? tau : static_cast<long double>(T);
    const long double gap = b - mu * active;
    sum += -lb + half_log_2pi + 1.5L * std::log(tau) + gap * gap / (2.0L * tau);
  }
  return sum;
}

double tada_estimator_closed_form(const std::vector<double>& taus, double b, double T) {
  require_taus(taus);
  std::vector<double> early;
  std::vector<double> late_inv;
  for (double t : taus) {
    if (t <= T) {
      early.push_back(t);
    } else {
      late_inv.push_back(1.0 / t);
    }
  }
  const double m = static_cast<double>(early.size());
  const double s_early = pairwise_sum(early);
  const double s_inv = pairwise_sum(late_inv);
  const double den = s_early + s_inv * T * T;
  if (!(den > 0.0)) throw std::domain_error("tada_estimator_closed_form: degenerate denominator");
  return (m * b + s_inv * T * b) / den;
}

double asymptotic_tada_limit(const SwitchModel& m) {
  const double p_early = 1.0 - survival_after_T(m);
  const double mean_early = truncated_mean(m);
  const QuadResult q =
      integrate_to_infinity_reciprocal([&](double tau) { return m.T / tau * fptd_addm_switch(tau, m); }, m.T, 1e-10);
  const double e_late = q.value;
  return (p_early * m.b + e_late * m.b) / (mean_early + e_late * m.T);
}

EstimationResult mle_one_boundary(const std::vector<double>& taus, double b, double T) {
  require_taus(taus);
  auto score = [&](double mu) {
    const SwitchModel m(mu, b, T);
    return reduce_sum(taus.size(), [&](std::size_t i) { return score_addm_switch(taus[i], m); });
  };
  // start around the pre-switch estimate, which is exact when no tau exceeds T
  double s_tau = 0.0;
  for (double t : taus) s_tau += std::min(t, T);
  const double guess = b * static_cast<double>(taus.size()) / s_tau;
  const auto [lo, hi] = expand_sign_bracket(score, guess - 0.5, guess + 0.5);

  std::uintmax_t iters = 200;
  const auto tol = [](double a, double c) { return std::fabs(c - a) < 1e-12; };
  const double slo = score(lo);
  const double shi = score(hi);
  double root;
  if (slo == 0.0) {
    root = lo;
    iters = 0;
  } else if (shi == 0.0) {
    root = hi;
    iters = 0;
  } else {
    const auto r = boost::math::tools::toms748_solve(score, lo, hi, slo, shi, tol, iters);
    root = 0.5 * (r.first + r.second);
  }

  EstimationResult out;
  out.method = "exact";
  out.names = {"mu"};
  out.estimate = {root};
  out.nll = exact_nll_one_boundary(root, taus, b, T);
  out.iterations = static_cast<int>(iters);
  out.converged = iters < 200;
  // curvature from the score slope
  const double h = 1e-5 * std::max(1.0, std::fabs(root));
  const double info = -(score(root + h) - score(root - h)) / (2.0 * h);
  if (info > 0.0) out.stderr_proxy = std::vector<double>{1.0 / std::sqrt(info)};
  return out;
}

const char* method_name(Method m) { return m == Method::kExact ? "exact" : "tada"; }

Method parse_method(const std::string& s) {
  if (s == "exact" || s == "ml") return Method::kExact;
  if (s == "tada") return Method::kTada;
  throw std::invalid_argument("unknown method '" + s + "' (expected exact or tada)");
}

double exact_nll_alternating(double mu_a, double mu_b, const std::vector<Trial>& trials, const Geometry& g,
                             const SolverConfig& cfg) {
  require_trials(trials);
  SpectralCache cache;
  try {
    return finite_or_inf(reduce_sum(trials.size(), [&](std::size_t i) {
      const Trial& t = trials[i];
      return -loglik_trial(alternating_drift(t, mu_a, mu_b), g.x0, g.sigma, g.upper, g.lower, t.tau, t.choice, cfg,
                           &cache);
    }));
  } catch (const SolverError&) {
    return kInf;
  }
}

double tada_nll_alternating(double mu_a, double mu_b, const std::vector<Trial>& trials, const Geometry& g) {
  require_trials(trials);
  return finite_or_inf(reduce_sum(trials.size(), [&](std::size_t i) {
    const Trial& t = trials[i];
    const double fa = fraction_a(t);
    const double eff = fa * mu_a + (1.0 - fa) * mu_b;
    return -log_fptd_two_boundary(t.tau, t.choice, TwoBoundaryModel(g.x0, eff, g.sigma, g.upper, g.lower));
  }));
}

EstimationResult mle_two_boundary(const std::vector<Trial>& trials, const Geometry& g, Method method,
                                  const FitOptions& opt, std::vector<double> start) {
  require_trials(trials);
  if (start.size() != 2) throw std::invalid_argument("mle_two_boundary: start must have two entries");
  const Objective f = [&](const std::vector<double>& x) {
    return method == Method::kExact ? exact_nll_alternating(x[0], x[1], trials, g, opt.solver)
                                    : tada_nll_alternating(x[0], x[1], trials, g);
  };
  NelderMeadOptions nm;
  nm.f_tol = opt.f_tol;
  nm.x_tol = opt.x_tol;
  nm.max_iterations = opt.max_iterations;
  nm.initial_step = {0.5, 0.5};
  const NelderMeadResult r = nelder_mead(f, std::move(start), nm);

  EstimationResult out;
  out.method = method_name(method);
  out.names = {"mu_a", "mu_b"};
  out.estimate = r.x;
  out.nll = r.f;
  out.iterations = r.iterations;
  out.converged = r.converged && std::isfinite(r.f);
  if (opt.compute_stderr && out.converged) out.stderr_proxy = curvature_stderr(f, r.x);
  return out;
}

double exact_nll_addm(const ADDMParams& p, const std::vector<Trial>& trials, const SolverConfig& cfg) {
  require_trials(trials);
  SpectralCache cache;
  try {
    return finite_or_inf(reduce_sum(trials.size(), [&](std::size_t i) {
      const Trial& t = trials[i];
      return -loglik_trial(addm_drift(t, p.eta, p.kappa), p.x0, p.sigma, p.u, -p.u, t.tau, t.choice, cfg, &cache);
    }));
  } catch (const SolverError&) {
    return kInf;
  }
}

double tada_nll_addm(const ADDMParams& p, const std::vector<Trial>& trials) {
  require_trials(trials);
  return finite_or_inf(reduce_sum(trials.size(), [&](std::size_t i) {
    const Trial& t = trials[i];
    const double fa = fraction_a(t);
    const double eff = fa * addm_drift_value(Option::kA, t.r_a, t.r_b, p.eta, p.kappa) +
                       (1.0 - fa) * addm_drift_value(Option::kB, t.r_a, t.r_b, p.eta, p.kappa);
    return -log_fptd_two_boundary(t.tau, t.choice, TwoBoundaryModel(p.x0, eff, p.sigma, p.u, -p.u));
  }));
}

namespace {

// (eta, log kappa, log u, logit((x0/u + 1)/2)) <-> ADDMParams
std::optional<ADDMParams> from_unconstrained(const std::vector<double>& z) {
  const double kappa = std::exp(z[1]);
  const double u = std::exp(z[2]);
  const double ratio = std::tanh(0.5 * z[3]);  // == 2 logistic(z) - 1
  if (!std::isfinite(kappa) || !std::isfinite(u) || !(kappa > 0.0) || !(u > 0.0) || !(std::fabs(ratio) < 1.0)) {
    return std::nullopt;
  }
  return ADDMParams(z[0], kappa, u, ratio * u);
}

std::vector<double> to_unconstrained(double eta, double kappa, double u, double x0) {
  const double r = x0 / u;
  return {eta, std::log(kappa), std::log(u), std::log((1.0 + r) / (1.0 - r))};
}

}  // namespace

EstimationResult fit_addm(const std::vector<Trial>& trials, Method method, const FitOptions& opt) {
  require_trials(trials);
  const Objective f = [&](const std::vector<double>& z) {
    const auto p = from_unconstrained(z);
    if (!p) return kInf;
    return method == Method::kExact ? exact_nll_addm(*p, trials, opt.solver) : tada_nll_addm(*p, trials);
  };
  const std::vector<std::vector<double>> starts = {
      to_unconstrained(0.5, 0.5, 1.5, 0.0),
      to_unconstrained(0.2, 1.0, 2.5, 0.4),
      to_unconstrained(0.8, 0.25, 1.0, -0.3),
  };
  NelderMeadOptions nm;
  nm.f_tol = opt.f_tol;
  nm.x_tol = opt.x_tol;
  nm.max_iterations = opt.max_iterations;
  nm.initial_step = {0.2, 0.2, 0.2, 0.2};

  std::optional<NelderMeadResult> best;
  int iterations = 0;
  for (const auto& s : starts) {
    NelderMeadResult r = nelder_mead(f, s, nm);
    iterations += r.iterations;
    const bool better = !best || (r.converged && !best->converged) ||
                        (r.converged == best->converged && r.f < best->f);
    if (better) best = std::move(r);
  }

  EstimationResult out;
  out.method = method_name(method);
  out.names = {"eta", "kappa", "u", "x0"};
  const auto p = from_unconstrained(best->x);
  out.estimate = p ? std::vector<double>{p->eta, p->kappa, p->u, p->x0} : best->x;
  out.nll = best->f;
  out.iterations = iterations;
  out.converged = best->converged && std::isfinite(best->f) && p.has_value();
  if (opt.compute_stderr && out.converged) {
    const Objective natural = [&](const std::vector<double>& x) {
      if (!(x[1] > 0.0) || !(x[2] > 0.0) || !(std::fabs(x[3]) < x[2])) return kInf;
      const ADDMParams q(x[0], x[1], x[2], x[3]);
      return method == Method::kExact ? exact_nll_addm(q, trials, opt.solver) : tada_nll_addm(q, trials);
    };
    out.stderr_proxy = curvature_stderr(natural, out.estimate);
  }
  return out;
}

}  // namespace ddm
