#include "ddm/quadrature.hpp"

#include <doctest.h>

#include <cmath>

TEST_CASE("polynomials are integrated exactly") {
  // 21-point Kronrod is exact through degree 31
  const auto r = ddm::integrate([](double x) { return std::pow(x, 20); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 21.0).epsilon(1e-15));
  CHECK(r.intervals == 1);
}

TEST_CASE("adaptive refinement on a peaked integrand") {
  // int_{-1}^{1} 1/(1e-4 + x^2) dx = 2/1e-2 * atan(1/1e-2)
  const double ref = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
  const auto r = ddm::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(ref).epsilon(1e-12));
  CHECK(r.intervals > 1);
}

TEST_CASE("semi-infinite integrals") {
  const auto e = ddm::integrate_to_infinity([](double t) { return std::exp(-t); }, 0.0);
  CHECK(e.converged);
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));

  // Levy density with d = 1 has mass 1 and a t^{-3/2} tail
  const auto levy = ddm::integrate_to_infinity(
      [](double t) { return t > 0.0 ? std::exp(-1.0 / (2.0 * t)) / std::sqrt(2.0 * M_PI * t * t * t) : 0.0; }, 0.0,
      1e-12);
  CHECK(levy.converged);
  CHECK(levy.value == doctest::Approx(1.0).epsilon(1e-9));

  const auto rec = ddm::integrate_to_infinity_reciprocal([](double t) { return 1.0 / (t * t * t); }, 2.0);
  CHECK(rec.converged);
  CHECK(rec.value == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("reversed and empty intervals") {
  CHECK(ddm::integrate([](double x) { return x; }, 1.0, 0.0).value == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(ddm::integrate([](double x) { return x; }, 1.0, 1.0).value == 0.0);
}
