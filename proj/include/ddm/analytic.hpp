#pragma once

// Closed-form first-passage quantities for Brownian motion with drift.
//
// Conventions: time and space are in model units; every density is a
// (sub-)density in t. Functions throw std::domain_error on arguments outside
// their support and std::invalid_argument from model constructors.

namespace ddm {

enum class Boundary { kUpper, kLower };

const char* boundary_name(Boundary c);

// X(t) = x0 + mu t + sigma W(t), absorbed at b (either side of x0).
struct OneBoundaryModel {
  double x0;
  double mu;
  double sigma;
  double b;
  OneBoundaryModel(double x0, double mu, double sigma, double b);
};

// dX = mu 1{t <= T} dt + dW, X(0) = 0, absorbed at b > 0.
struct SwitchModel {
  double mu;
  double b;
  double T;
  SwitchModel(double mu, double b, double T);
};

// Constant drift between lower < x0 < upper.
struct TwoBoundaryModel {
  double x0;
  double mu;
  double sigma;
  double upper;
  double lower;
  TwoBoundaryModel(double x0, double mu, double sigma, double upper, double lower);
};

// Sub-density of X(t) on {not yet absorbed}. x must lie on the same side of b
// as x0 (x == b gives 0).
double npd(double x, double t, const OneBoundaryModel& m);

double fptd_one_boundary(double t, const OneBoundaryModel& m);
double log_fptd_one_boundary(double t, const OneBoundaryModel& m);

// Hitting-time density of the switch model (drift mu until T, zero after).
double fptd_addm_switch(double tau, const SwitchModel& m);
double log_fptd_addm_switch(double tau, const SwitchModel& m);
// d/dmu log f(tau; mu).
double score_addm_switch(double tau, const SwitchModel& m);

// Constant-drift hitting density evaluated at the time-averaged drift
// alpha(mu, tau, T). Not normalised.
double tada_density(double tau, const SwitchModel& m);
double log_tada_density(double tau, const SwitchModel& m);
// Integral of tada_density over (T, inf).
double tada_tail_mass(const SwitchModel& m);

// P(tau > T).
double survival_after_T(const SwitchModel& m);
// E[tau 1{tau <= T}].
double truncated_mean(const SwitchModel& m);

// Sub-density of absorption at boundary c at time t.
double fptd_two_boundary(double t, Boundary c, const TwoBoundaryModel& m);
double log_fptd_two_boundary(double t, Boundary c, const TwoBoundaryModel& m);

}  // namespace ddm
