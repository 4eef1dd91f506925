#include "ddm/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ddm {
namespace {

// W. J. Cody's rational Chebyshev approximations (Math. Comp. 1969), the
// same packet netlib ships as CALERF. One routine, three outputs.
enum class ErfKind { kErf, kErfc, kErfcx };

constexpr std::array<double, 5> kA = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                                      3209.37758913846947, .185777706184603153};
constexpr std::array<double, 4> kB = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                                      2844.23683343917062};
constexpr std::array<double, 9> kC = {.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                                      298.635138197400131, 881.95222124176909,  1712.04761263407058,
                                      2051.07837782607147, 1230.33935479799725, 2.15311535474403846e-8};
constexpr std::array<double, 8> kD = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                                      1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                                      3439.36767414372164, 1230.33935480374942};
constexpr std::array<double, 6> kP = {.305326634961232344, .360344899949804439, .125781726111229246,
                                      .0160837851487422766, 6.58749161529837803e-4, .0163153871373020978};
constexpr std::array<double, 5> kQ = {2.56852019228982242, 1.87295284992346047, .527905102951428412,
                                      .0605183413124413191, .00233520497626869185};

constexpr double kThresh = 0.46875;
constexpr double kXNeg = -26.628;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;
constexpr double kXHuge = 6.71e7;
constexpr double kXMax = 2.53e307;

// exp(-y^2) with y^2 split so the rounding error of y*y is not amplified.
double exp_neg_square(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

double calerf(double x, ErfKind kind) {
  const double y = std::fabs(x);
  double result = 0.0;

  if (y <= kThresh) {
    const double ysq = y > kXSmall ? y * y : 0.0;
    double xnum = kA[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + kA[i]) * ysq;
      xden = (xden + kB[i]) * ysq;
    }
    result = x * (xnum + kA[3]) / (xden + kB[3]);
    if (kind != ErfKind::kErf) result = 1.0 - result;
    if (kind == ErfKind::kErfcx) result *= std::exp(ysq);
    return result;
  }

  if (y <= 4.0) {
    double xnum = kC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kC[i]) * y;
      xden = (xden + kD[i]) * y;
    }
    result = (xnum + kC[7]) / (xden + kD[7]);
    if (kind != ErfKind::kErfcx) result *= exp_neg_square(y);
  } else {
    bool done = false;
    if (y >= kXBig) {
      if (kind != ErfKind::kErfcx || y >= kXMax) {
        done = true;
      } else if (y >= kXHuge) {
        result = kInvSqrtPi / y;
        done = true;
      }
    }
    if (!done) {
      const double ysq = 1.0 / (y * y);
      double xnum = kP[5] * ysq;
      double xden = ysq;
      for (int i = 0; i < 4; ++i) {
        xnum = (xnum + kP[i]) * ysq;
        xden = (xden + kQ[i]) * ysq;
      }
      result = ysq * (xnum + kP[4]) / (xden + kQ[4]);
      result = (kInvSqrtPi - result) / y;
      if (kind != ErfKind::kErfcx) result *= exp_neg_square(y);
    }
  }

  switch (kind) {
    case ErfKind::kErf:
      result = (0.5 - result) + 0.5;
      return x < 0.0 ? -result : result;
    case ErfKind::kErfc:
      return x < 0.0 ? 2.0 - result : result;
    case ErfKind::kErfcx:
      if (x < 0.0) {
        if (x < kXNeg) return std::numeric_limits<double>::infinity();
        const double ysq = std::trunc(x * 16.0) / 16.0;
        const double del = (x - ysq) * (x + ysq);
        const double e = std::exp(ysq * ysq) * std::exp(del);
        result = e + e - result;
      }
      return result;
  }
  return result;
}

}  // namespace

double erfc(double x) { return calerf(x, ErfKind::kErfc); }

double erf(double x) { return calerf(x, ErfKind::kErf); }

double erfcx(double x) { return calerf(x, ErfKind::kErfcx); }

double log_erfcx(double x) {
  if (x < 0.0) return x * x + std::log(erfc(x));
  return std::log(erfcx(x));
}

double phi(double x) { return x * erfcx(x); }

double phi_prime(double x) {
  if (x <= 8.0) return (2.0 * x * x + 1.0) * erfcx(x) - 2.0 * x * kInvSqrtPi;
  // sum_{n>=1} (-1)^{n+1} 2n (2n-1)!! / (2^n x^{2n+1}) / sqrt(pi)
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0 / (x * x * x);
  double sum = term;
  for (int n = 1; n < 40; ++n) {
    term *= -static_cast<double>((n + 1) * (2 * n + 1)) / static_cast<double>(n) * inv2x2;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return sum * kInvSqrtPi;
}

double ig_pdf(double x, double m, double lambda) {
  if (!(x > 0.0) || !(m > 0.0) || !(lambda > 0.0)) {
    throw std::domain_error("ig_pdf: requires x, m, lambda > 0");
  }
  const double d = x - m;
  return std::sqrt(lambda / (2.0 * kPi * x * x * x)) * std::exp(-lambda * d * d / (2.0 * m * m * x));
}

double ig_cdf(double x, double m, double lambda) {
  if (!(x > 0.0) || !(m > 0.0) || !(lambda > 0.0)) {
    throw std::domain_error("ig_cdf: requires x, m, lambda > 0");
  }
  // 1 - erfc(a)/2 + exp(2 lambda/m) erfc(c)/2 with a = r (x/m - 1), c = r (x/m + 1).
  // exp(2 lambda/m) erfc(c) = exp(-a^2) erfcx(c) keeps the second term finite.
  const double r = std::sqrt(lambda / (2.0 * x));
  const double a = r * (x / m - 1.0);
  const double c = r * (x / m + 1.0);
  return 0.5 * erfc(-a) + 0.5 * std::exp(-a * a) * erfcx(c);
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

double log_sub_exp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double d = b - a;
  if (d > -0.693) return a + std::log(-std::expm1(d));
  return a + std::log1p(-std::exp(d));
}

}  // namespace ddm
