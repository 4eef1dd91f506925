#include "ddm/analytic.hpp"

#include "ddm/quadrature.hpp"
#include "ddm/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ddm {
namespace {

void require_positive_time(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error(std::string(who) + ": t must be positive");
}

// 1/sqrt(pi) - phi(x), with an asymptotic series once x is large enough that
// the subtraction would lose digits.
double phi_gap(double x) {
  if (x <= 8.0) return kInvSqrtPi - phi(x);
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = inv2x2;
  double sum = term;
  for (int n = 1; n < 60; ++n) {
    term *= -static_cast<double>(2 * n + 1) * inv2x2;
    sum += term;
    if (std::fabs(term) < 1e-17 * sum) break;
  }
  return sum * kInvSqrtPi;
}

struct SwitchTail {
  double log_d;    // log(phi(p) - phi(q))
  double d_ratio;  // (phi'(p) - phi'(q)) / (phi(p) - phi(q))
};

SwitchTail switch_tail(double p, double q) {
  SwitchTail out{};
  if (q < 0.0) {
    // Scale both terms by erfcx(q) so nothing overflows for very negative q.
    const double eq = log_erfcx(q);
    const double r = std::exp(log_erfcx(p) - eq);
    const double d = p * r - q;
    const double dp = (2.0 * p * p + 1.0) * r - (2.0 * q * q + 1.0) - 2.0 * (p - q) * kInvSqrtPi * std::exp(-eq);
    out.log_d = std::log(d) + eq;
    out.d_ratio = dp / d;
    return out;
  }
  const double d = q > 8.0 ? phi_gap(q) - phi_gap(p) : phi(p) - phi(q);
  out.log_d = std::log(d);
  out.d_ratio = (phi_prime(p) - phi_prime(q)) / d;
  return out;
}

// Navarro & Fuss (2009) series for the lower-boundary density of a unit-width,
// unit-noise, zero-drift process started at w. Returns log f(u | w).
double log_nf_standard(double u, double w) {
  constexpr double kEps = 1e-10;
  // Term-count estimates for both representations at tolerance kEps.
  double kl = 1.0 / (kPi * std::sqrt(u));
  if (kPi * u * kEps < 1.0) kl = std::max(kl, std::sqrt(-2.0 * std::log(kPi * u * kEps) / (kPi * kPi * u)));
  double ks = 2.0;
  if (2.0 * std::sqrt(2.0 * kPi * u) * kEps < 1.0) {
    ks = std::max(std::sqrt(u) + 1.0, 2.0 + std::sqrt(-2.0 * u * std::log(2.0 * std::sqrt(2.0 * kPi * u) * kEps)));
  }

  if (ks < kl) {
    // Image sum, normalised by its k = 0 term w exp(-w^2 / 2u).
    double sum = 1.0;
    for (int k = 1; k < 10000; ++k) {
      const double wp = w + 2.0 * k;
      const double wm = w - 2.0 * k;
      const double tp = wp * std::exp(-(wp * wp - w * w) / (2.0 * u));
      const double tm = wm * std::exp(-(wm * wm - w * w) / (2.0 * u));
      sum += (tp + tm) / w;
      const double a = w + 2.0 * (k + 1);
      const double c = 2.0 * (k + 1) - w;
      const double tail = 0.5 * u * (std::exp(-(a * a - w * w) / (2.0 * u)) + std::exp(-(c * c - w * w) / (2.0 * u))) / w;
      if (tail < kEps * std::fabs(sum)) break;
    }
    return -0.5 * std::log(2.0 * kPi * u * u * u) + std::log(w) - w * w / (2.0 * u) + std::log(sum);
  }

  // Eigenfunction sum, normalised by exp(-pi^2 u / 2).
  const double c = 0.5 * kPi * kPi * u;
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    sum += k * std::exp(-(static_cast<double>(k) * k - 1.0) * c) * std::sin(k * kPi * w);
    const double tail = std::exp(-(static_cast<double>(k) * k - 1.0) * c) / (2.0 * c) +
                        (k + 1) * std::exp(-(static_cast<double>(k + 1) * (k + 1) - 1.0) * c);
    if (k >= 1 && tail < kEps * std::fabs(sum)) break;
  }
  return std::log(kPi) - c + std::log(sum);
}

}  // namespace

const char* boundary_name(Boundary c) { return c == Boundary::kUpper ? "upper" : "lower"; }

OneBoundaryModel::OneBoundaryModel(double x0_, double mu_, double sigma_, double b_)
    : x0(x0_), mu(mu_), sigma(sigma_), b(b_) {
  if (!(sigma > 0.0)) throw std::invalid_argument("OneBoundaryModel: sigma must be positive");
  if (b == x0) throw std::invalid_argument("OneBoundaryModel: b must differ from x0");
  if (!std::isfinite(x0) || !std::isfinite(mu) || !std::isfinite(b) || !std::isfinite(sigma)) {
    throw std::invalid_argument("OneBoundaryModel: parameters must be finite");
  }
}

SwitchModel::SwitchModel(double mu_, double b_, double T_) : mu(mu_), b(b_), T(T_) {
  if (!(b > 0.0) || !(T > 0.0) || !std::isfinite(mu) || !std::isfinite(b) || !std::isfinite(T)) {
    throw std::invalid_argument("SwitchModel: need finite mu and b, T > 0");
  }
}

TwoBoundaryModel::TwoBoundaryModel(double x0_, double mu_, double sigma_, double upper_, double lower_)
    : x0(x0_), mu(mu_), sigma(sigma_), upper(upper_), lower(lower_) {
  if (!(sigma > 0.0)) throw std::invalid_argument("TwoBoundaryModel: sigma must be positive");
  if (!(lower < x0 && x0 < upper)) throw std::invalid_argument("TwoBoundaryModel: need lower < x0 < upper");
  if (!std::isfinite(mu) || !std::isfinite(upper) || !std::isfinite(lower)) {
    throw std::invalid_argument("TwoBoundaryModel: parameters must be finite");
  }
}

double npd(double x, double t, const OneBoundaryModel& m) {
  require_positive_time(t, "npd");
  const double side = (x - m.b) * (m.x0 - m.b);
  if (side < 0.0) throw std::domain_error("npd: x on the absorbed side of b");
  if (side == 0.0) return 0.0;
  const double s2t = m.sigma * m.sigma * t;
  const double dx = x - m.x0;
  const double log_pref = m.mu * dx / (m.sigma * m.sigma) - m.mu * m.mu * t / (2.0 * m.sigma * m.sigma) -
                          0.5 * std::log(2.0 * kPi * s2t) - dx * dx / (2.0 * s2t);
  // second Gaussian / first = exp(-2 (x - b)(x0 - b) / (sigma^2 t))
  return std::exp(log_pref) * -std::expm1(-2.0 * side / s2t);
}

double log_fptd_one_boundary(double t, const OneBoundaryModel& m) {
  require_positive_time(t, "fptd_one_boundary");
  const double d = m.b - m.x0;
  const double s2 = m.sigma * m.sigma;
  const double e = d - m.mu * t;
  return std::log(std::fabs(d)) - (0.5 * std::log(2.0 * kPi * s2) + 1.5 * std::log(t)) - e * e / (2.0 * s2 * t);
}

double fptd_one_boundary(double t, const OneBoundaryModel& m) { return std::exp(log_fptd_one_boundary(t, m)); }

double log_fptd_addm_switch(double tau, const SwitchModel& m) {
  require_positive_time(tau, "fptd_addm_switch");
  if (tau <= m.T) {
    const double e = m.b - m.mu * tau;
    return std::log(m.b) - (kLogSqrt2Pi + 1.5 * std::log(tau)) - e * e / (2.0 * tau);
  }
  const double s = std::sqrt((tau - m.T) / (2.0 * m.T * tau));
  const double p = (m.T * m.mu + m.b) * s;
  const double q = (m.T * m.mu - m.b) * s;
  const double k = m.T * m.mu - m.b;
  const SwitchTail st = switch_tail(p, q);
  return -k * k / (2.0 * m.T) + st.log_d - std::log(2.0 * s) - (kLogSqrt2Pi + 1.5 * std::log(tau));
}

double fptd_addm_switch(double tau, const SwitchModel& m) { return std::exp(log_fptd_addm_switch(tau, m)); }

double score_addm_switch(double tau, const SwitchModel& m) {
  require_positive_time(tau, "score_addm_switch");
  if (tau <= m.T) return m.b - m.mu * tau;
  const double s = std::sqrt((tau - m.T) / (2.0 * m.T * tau));
  const double p = (m.T * m.mu + m.b) * s;
  const double q = (m.T * m.mu - m.b) * s;
  return -(m.T * m.mu - m.b) + m.T * s * switch_tail(p, q).d_ratio;
}

double log_tada_density(double tau, const SwitchModel& m) {
  require_positive_time(tau, "tada_density");
  const double drift_time = tau <= m.T ? m.mu * tau : m.mu * m.T;  // alpha(mu, tau, T) * tau
  const double e = m.b - drift_time;
  return std::log(m.b) - (kLogSqrt2Pi + 1.5 * std::log(tau)) - e * e / (2.0 * tau);
}

double tada_density(double tau, const SwitchModel& m) { return std::exp(log_tada_density(tau, m)); }

double tada_tail_mass(const SwitchModel& m) {
  const double k = std::fabs(m.b - m.T * m.mu);
  if (k == 0.0) return std::sqrt(2.0 / (kPi * m.T)) * m.b;
  return m.b / k * erf(k / std::sqrt(2.0 * m.T));
}

double survival_after_T(const SwitchModel& m) {
  const double r = std::sqrt(2.0 * m.T);
  const double a = (m.T * m.mu - m.b) / r;
  const double c = (m.T * m.mu + m.b) / r;
  // exp(2 b mu) erfc(c) == exp(-a^2) erfcx(c)
  if (c < 0.0) return 0.5 * (erfc(a) - std::exp(2.0 * m.b * m.mu) * erfc(c));
  if (a < 0.0) return 0.5 * (erfc(a) - std::exp(-a * a) * erfcx(c));
  return 0.5 * std::exp(-a * a) * (erfcx(a) - erfcx(c));
}

double truncated_mean(const SwitchModel& m) {
  if (std::fabs(m.mu * m.b) < 1e-3) {
    // The closed form divides by mu and cancels; integrate instead.
    const OneBoundaryModel ob(0.0, m.mu, 1.0, m.b);
    const QuadResult r = integrate([&](double t) { return t > 0.0 ? t * fptd_one_boundary(t, ob) : 0.0; }, 0.0, m.T, 1e-13);
    return r.value;
  }
  const double r = std::sqrt(2.0 * m.T);
  const double a = (m.T * m.mu - m.b) / r;
  const double c = (m.T * m.mu + m.b) / r;
  const double second = c < 0.0 ? std::exp(2.0 * m.b * m.mu) * erfc(c) : std::exp(-a * a) * erfcx(c);
  return m.b / m.mu * 0.5 * (erfc(-a) - second);
}

double log_fptd_two_boundary(double t, Boundary c, const TwoBoundaryModel& m) {
  require_positive_time(t, "fptd_two_boundary");
  const double a = (m.upper - m.lower) / m.sigma;
  double v = m.mu / m.sigma;
  double w = (m.x0 - m.lower) / (m.upper - m.lower);
  if (c == Boundary::kUpper) {
    v = -v;
    w = 1.0 - w;
  }
  const double u = t / (a * a);
  return -2.0 * std::log(a) - v * a * w - 0.5 * v * v * t + log_nf_standard(u, w);
}

double fptd_two_boundary(double t, Boundary c, const TwoBoundaryModel& m) {
  return std::exp(log_fptd_two_boundary(t, c, m));
}

}  // namespace ddm
