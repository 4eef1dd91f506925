#pragma once

// Scalar special functions shared by every density formula in the library.
//
// Accuracy contracts (checked in tests/unit/test_special_fn.cpp):
//   erfc   relative error <= 1e-13 whenever |erfc(x)| > 1e-300
//   erfcx  relative error <= 1e-12, finite for x >= -26.6, no overflow for large x
//
// All functions are pure and thread-safe.

namespace ddm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kInvSqrtPi = 0.56418958354775628695;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Complementary error function, (2/sqrt(pi)) * int_x^inf exp(-z^2) dz.
double erfc(double x);

// Error function, 1 - erfc(x), evaluated without cancellation for small |x|.
double erf(double x);

// Scaled complementary error function exp(x^2) * erfc(x).
// Overflows to +inf only for x below about -26.6.
double erfcx(double x);

// log(erfcx(x)); finite for every finite x.
double log_erfcx(double x);

// x * erfcx(x). Strictly increasing on the real line, tends to 1/sqrt(pi)
// as x -> +inf.
double phi(double x);

// d/dx phi(x) = (2x^2 + 1) erfcx(x) - 2x/sqrt(pi), with an asymptotic series
// for large positive x where the direct form cancels.
double phi_prime(double x);

// Inverse Gaussian IG(m, lambda) density and distribution function.
// Throws std::domain_error unless x, m, lambda > 0.
double ig_pdf(double x, double m, double lambda);
double ig_cdf(double x, double m, double lambda);

// log(exp(a) + exp(b)) and log(exp(a) - exp(b)) for a >= b.
double log_add_exp(double a, double b);
double log_sub_exp(double a, double b);

}  // namespace ddm
