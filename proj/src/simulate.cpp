#include "ddm/simulate.hpp"

#include "ddm/parallel.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddm {
namespace {

// substream tags: independent Philox keys for each kind of draw in a trial
constexpr std::uint64_t kNoise = 1;
constexpr std::uint64_t kFixations = 2;
constexpr std::uint64_t kRatings = 3;
constexpr std::uint64_t kExact = 4;

double normal(Philox& g) {
  boost::random::normal_distribution<double> nd;
  return nd(g);
}

// Michael, Schucany & Haas (1976) transformation sampler for IG(m, lambda).
double sample_inverse_gaussian(double m, double lambda, Philox& g) {
  const double nu = normal(g);
  const double y = nu * nu;
  const double my = m * y;
  const double x = m + m * my / (2.0 * lambda) - m / (2.0 * lambda) * std::sqrt(4.0 * lambda * my + my * my);
  return uniform_open(g) <= m / (m + x) ? x : m * m / x;
}

// Remaining passage time of driftless unit Brownian motion over distance d.
double sample_levy(double d, Philox& g) {
  double z = 0.0;
  while (z == 0.0) z = normal(g);
  return d * d / (z * z);
}

struct FixationRun {
  double tau;
  Boundary choice;
  FixationTrajectory fixations;
};

FixationRun run_fixation_trial(double mu_a, double mu_b, double x0, double sigma, double upper, double lower, double dt,
                               RngSeed seed, const FixationConfig& cfg) {
  FixationSampler sampler(seed, cfg);
  Philox noise(seed, kNoise);
  FixationRun out{0.0, Boundary::kUpper, {}};
  out.fixations.push_back(sampler.next());
  double seg_start = 0.0;
  double seg_end = out.fixations.back().duration;
  auto drift_of = [&](Option o) { return o == Option::kA ? mu_a : mu_b; };
  const double noise_scale = sigma * std::sqrt(dt);
  double x = x0;
  for (std::uint64_t n = 0;; ++n) {
    const double a = static_cast<double>(n) * dt;
    const double b = static_cast<double>(n + 1) * dt;
    double lo = a;
    double incr = 0.0;
    while (seg_end < b) {
      incr += drift_of(out.fixations.back().option) * (seg_end - lo);
      lo = seg_end;
      out.fixations.push_back(sampler.next());
      seg_start = seg_end;
      seg_end = seg_start + out.fixations.back().duration;
    }
    incr += drift_of(out.fixations.back().option) * (b - lo);
    x += incr + noise_scale * normal(noise);
    if (x >= upper || x <= lower) {
      out.tau = b;
      out.choice = x >= upper ? Boundary::kUpper : Boundary::kLower;
      out.fixations.back().duration = b - seg_start;
      return out;
    }
  }
}

}  // namespace

const char* option_name(Option o) { return o == Option::kA ? "A" : "B"; }

FixationSampler::FixationSampler(RngSeed seed, const FixationConfig& cfg)
    : engine_(seed, kFixations), cfg_(cfg), current_(Option::kA) {
  if (!(cfg.shape > 0.0) || !(cfg.rate > 0.0)) throw std::invalid_argument("FixationConfig: shape and rate must be positive");
}

Fixation FixationSampler::next() {
  if (!started_) {
    current_ = (engine_() & 1u) ? Option::kB : Option::kA;
    started_ = true;
  } else {
    current_ = current_ == Option::kA ? Option::kB : Option::kA;
  }
  boost::random::gamma_distribution<double> gamma(cfg_.shape, 1.0 / cfg_.rate);
  double d = 0.0;
  while (!(d > 0.0)) d = gamma(engine_);
  return {current_, d};
}

FixationTrajectory sample_fixations(RngSeed seed, const FixationConfig& cfg, double horizon) {
  FixationSampler sampler(seed, cfg);
  FixationTrajectory out;
  double total = 0.0;
  do {
    out.push_back(sampler.next());
    total += out.back().duration;
  } while (total < horizon);
  return out;
}

std::pair<int, int> sample_ratings(RngSeed seed) {
  Philox g(seed, kRatings);
  boost::random::uniform_int_distribution<int> d(1, 5);
  const int a = d(g);
  const int b = d(g);
  return {a, b};
}

ADDMParams::ADDMParams(double eta_, double kappa_, double u_, double x0_, double sigma_)
    : eta(eta_), kappa(kappa_), u(u_), x0(x0_), sigma(sigma_) {
  if (!std::isfinite(eta) || !(kappa > 0.0) || !(u > 0.0) || !(std::fabs(x0) < u) || !(sigma > 0.0)) {
    throw std::invalid_argument("ADDMParams: need kappa > 0, u > 0, |x0| < u, sigma > 0");
  }
}

double addm_drift_value(Option o, int r_a, int r_b, double eta, double kappa) {
  return o == Option::kA ? kappa * (r_a - eta * r_b) : kappa * (eta * r_a - r_b);
}

PiecewiseDrift drift_from_fixations(const FixationTrajectory& fix, double mu_a, double mu_b) {
  if (fix.empty()) throw std::invalid_argument("drift_from_fixations: empty trajectory");
  std::vector<double> switches;
  std::vector<double> values;
  double t = 0.0;
  for (std::size_t i = 0; i < fix.size(); ++i) {
    if (i > 0) switches.push_back(t);
    values.push_back(fix[i].option == Option::kA ? mu_a : mu_b);
    t += fix[i].duration;
  }
  return PiecewiseDrift(std::move(switches), std::move(values));
}

PiecewiseDrift addm_drift(const Trial& t, double eta, double kappa) {
  return drift_from_fixations(t.fixations, addm_drift_value(Option::kA, t.r_a, t.r_b, eta, kappa),
                              addm_drift_value(Option::kB, t.r_a, t.r_b, eta, kappa));
}

double simulate_one_boundary(const SwitchModel& m, double dt, RngSeed seed, double exact_tail_after) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_one_boundary: dt must be positive");
  Philox noise(seed, kNoise);
  const double sqdt = std::sqrt(dt);
  const double tail_start = m.T + std::max(0.0, exact_tail_after);
  double x = 0.0;
  for (std::uint64_t n = 0;; ++n) {
    const double a = static_cast<double>(n) * dt;
    const double b = static_cast<double>(n + 1) * dt;
    x += m.mu * (std::min(b, m.T) - std::min(a, m.T)) + sqdt * normal(noise);
    if (x >= m.b) return b;
    if (b >= tail_start) {
      const double rest = sample_levy(m.b - x, noise);
      return b + std::ceil(rest / dt) * dt;
    }
  }
}

std::vector<double> simulate_one_boundary_dataset(std::size_t n, const SwitchModel& m, double dt, std::uint64_t seed,
                                                  double exact_tail_after) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = simulate_one_boundary(m, dt, RngSeed{seed, i}, exact_tail_after); });
  return out;
}

double sample_switch_exact(const SwitchModel& m, RngSeed seed) {
  Philox g(seed, kExact);
  // passage time under constant drift mu (may be infinite when mu < 0)
  double first = std::numeric_limits<double>::infinity();
  if (m.mu > 0.0) {
    first = sample_inverse_gaussian(m.b / m.mu, m.b * m.b, g);
  } else if (m.mu == 0.0) {
    first = sample_levy(m.b, g);
  } else if (uniform_open(g) < std::exp(2.0 * m.b * m.mu)) {
    first = sample_inverse_gaussian(m.b / -m.mu, m.b * m.b, g);
  } else {
    (void)uniform_open(g);  // keep the draw count independent of the branch
  }
  if (first <= m.T) return first;
  // X(T) given survival: N(mu T, T) restricted to x < b, thinned by
  // 1 - exp(-2 b (b - x) / T)
  const double sd = std::sqrt(m.T);
  double x = 0.0;
  for (;;) {
    x = m.mu * m.T + sd * normal(g);
    if (x >= m.b) continue;
    if (uniform_open(g) < -std::expm1(-2.0 * m.b * (m.b - x) / m.T)) break;
  }
  return m.T + sample_levy(m.b - x, g);
}

std::pair<double, Boundary> simulate_two_boundary(const PiecewiseDrift& drift, double x0, double sigma, double upper,
                                                  double lower, double dt, RngSeed seed, double max_time) {
  if (!(lower < x0 && x0 < upper) || !(sigma > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("simulate_two_boundary: need lower < x0 < upper, sigma > 0, dt > 0");
  }
  Philox noise(seed, kNoise);
  const auto& switches = drift.switch_times();
  const auto& values = drift.values();
  std::size_t seg = 0;
  const double noise_scale = sigma * std::sqrt(dt);
  double x = x0;
  for (std::uint64_t n = 0;; ++n) {
    const double a = static_cast<double>(n) * dt;
    const double b = static_cast<double>(n + 1) * dt;
    if (a >= max_time) return {std::numeric_limits<double>::infinity(), Boundary::kUpper};
    double lo = a;
    double incr = 0.0;
    while (seg < switches.size() && switches[seg] < b) {
      incr += values[seg] * (switches[seg] - lo);
      lo = switches[seg];
      ++seg;
    }
    incr += values[seg] * (b - lo);
    x += incr + noise_scale * normal(noise);
    if (x >= upper) return {b, Boundary::kUpper};
    if (x <= lower) return {b, Boundary::kLower};
  }
}

std::vector<Trial> simulate_alternating_dataset(std::size_t n, double mu_a, double mu_b, double x0, double sigma,
                                                double upper, double lower, double dt, std::uint64_t seed,
                                                const FixationConfig& fix) {
  if (!(lower < x0 && x0 < upper) || !(sigma > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("simulate_alternating_dataset: bad geometry");
  }
  std::vector<Trial> out(n);
  parallel_for(n, [&](std::size_t i) {
    FixationRun r = run_fixation_trial(mu_a, mu_b, x0, sigma, upper, lower, dt, RngSeed{seed, i}, fix);
    out[i].tau = r.tau;
    out[i].choice = r.choice;
    out[i].fixations = std::move(r.fixations);
  });
  return out;
}

std::vector<Trial> simulate_addm_dataset(std::size_t n, const ADDMParams& p, double dt, std::uint64_t seed,
                                         const FixationConfig& fix) {
  if (n == 0) throw std::invalid_argument("simulate_addm_dataset: n must be positive");
  std::vector<Trial> out(n);
  parallel_for(n, [&](std::size_t i) {
    const RngSeed s{seed, i};
    const auto [r_a, r_b] = sample_ratings(s);
    FixationRun r = run_fixation_trial(addm_drift_value(Option::kA, r_a, r_b, p.eta, p.kappa),
                                       addm_drift_value(Option::kB, r_a, r_b, p.eta, p.kappa), p.x0, p.sigma, p.u,
                                       -p.u, dt, s, fix);
    out[i].tau = r.tau;
    out[i].choice = r.choice;
    out[i].fixations = std::move(r.fixations);
    out[i].r_a = r_a;
    out[i].r_b = r_b;
  });
  return out;
}

}  // namespace ddm
