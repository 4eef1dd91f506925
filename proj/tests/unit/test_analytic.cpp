#include "ddm/analytic.hpp"
#include "ddm/quadrature.hpp"
#include "oracles.hpp"

#include <boost/math/distributions/inverse_gaussian.hpp>
#include <doctest.h>

#include <cmath>

using ddm::Boundary;
using ddm::OneBoundaryModel;
using ddm::SwitchModel;
using ddm::TwoBoundaryModel;

TEST_CASE("model constructors validate") {
  CHECK_THROWS_AS(OneBoundaryModel(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(OneBoundaryModel(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SwitchModel(1.0, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SwitchModel(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TwoBoundaryModel(2.0, 0.0, 1.0, 1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(TwoBoundaryModel(0.0, std::nan(""), 1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("constant-drift hitting density is inverse Gaussian") {
  for (double mu : {0.3, 1.0, 2.5}) {
    for (double b : {0.5, 1.0, 2.0}) {
      const boost::math::inverse_gaussian_distribution<double> ig(b / mu, b * b);
      const OneBoundaryModel m(0.0, mu, 1.0, b);
      for (double t : {0.01, 0.1, 0.5, 1.0, 4.0, 20.0}) {
        CHECK(ddm::fptd_one_boundary(t, m) == doctest::Approx(boost::math::pdf(ig, t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("constant-drift hitting density: sigma, x0 and lower-side boundaries") {
  // X = x0 + mu t + sigma W hits b; in standard units distance (b - x0)/sigma, drift mu/sigma
  const OneBoundaryModel m(0.3, 0.7, 1.7, 1.5);
  for (double t : {0.05, 0.4, 2.0}) {
    CHECK(ddm::fptd_one_boundary(t, m) == doctest::Approx(oracle::hit(t, 0.7 / 1.7, 1.2 / 1.7)).epsilon(1e-13));
  }
  // boundary below the start: mirror image
  const OneBoundaryModel below(0.0, -0.8, 1.0, -1.0);
  const OneBoundaryModel above(0.0, 0.8, 1.0, 1.0);
  for (double t : {0.05, 0.4, 2.0}) {
    CHECK(ddm::fptd_one_boundary(t, below) == doctest::Approx(ddm::fptd_one_boundary(t, above)).epsilon(1e-15));
  }
}

TEST_CASE("constant-drift mass: 1 for mu >= 0, exp(2 b mu) otherwise") {
  for (double mu : {-1.0, -0.2, 0.0, 0.5, 2.0}) {
    const OneBoundaryModel m(0.0, mu, 1.0, 1.0);
    const double mass = oracle::half_line([&](double t) { return t > 0.0 ? ddm::fptd_one_boundary(t, m) : 0.0; }, 0.0);
    const double expect = mu >= 0.0 ? 1.0 : std::exp(2.0 * mu);
    CHECK(mass == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("npd integrates to the survival probability") {
  for (double mu : {-1.0, 0.0, 1.5}) {
    const OneBoundaryModel m(0.0, mu, 1.0, 1.0);
    const double t = 0.7;
    const double inside = oracle::finite([&](double x) { return ddm::npd(x, t, m); }, -20.0, 1.0);
    const double absorbed = oracle::finite([&](double s) { return ddm::fptd_one_boundary(s, m); }, 0.0, t);
    CHECK(inside + absorbed == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ddm::npd(1.0, t, m) == 0.0);
    CHECK(ddm::npd(0.2, t, m) == doctest::Approx(oracle::npd(0.2, t, mu, 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("switch density: pre-switch branch is the constant-drift density") {
  const SwitchModel m(2.0, 1.0, 0.5);
  const OneBoundaryModel c(0.0, 2.0, 1.0, 1.0);
  for (double t = 0.01; t <= 0.5; t += 0.01) {
    CHECK(ddm::fptd_addm_switch(t, m) == doctest::Approx(ddm::fptd_one_boundary(t, c)).epsilon(1e-13));
  }
  CHECK(ddm::fptd_addm_switch(0.5, m) == doctest::Approx(ddm::fptd_one_boundary(0.5, c)).epsilon(1e-13));
}

TEST_CASE("switch density: post-switch branch equals npd convolved with the Levy density") {
  for (double mu : {-2.0, 0.0, 1.0, 3.0}) {
    for (double T : {0.3, 0.5, 1.2}) {
      const SwitchModel m(mu, 1.0, T);
      for (double tau : {T + 0.01, T + 0.2, T + 1.0, T + 7.0}) {
        const double s = tau - T;
        const double ref = oracle::finite(
            [&](double x) { return oracle::npd(x, T, mu, 1.0) * oracle::levy(s, 1.0 - x); }, -30.0, 1.0);
        CHECK(ddm::fptd_addm_switch(tau, m) == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("switch density is continuous at T (the right branch has a sqrt kink)") {
  for (double mu : {-2.0, 0.5, 2.0, 5.0}) {
    const SwitchModel m(mu, 1.0, 0.5);
    const double left = ddm::fptd_addm_switch(0.5, m);
    // f(T + h) = f(T) + c sqrt(h) + O(h): cancel the sqrt term
    const double h1 = 1e-10;
    const double h2 = h1 / 100.0;
    const double right = (10.0 * ddm::fptd_addm_switch(0.5 + h2, m) - ddm::fptd_addm_switch(0.5 + h1, m)) / 9.0;
    CHECK(std::fabs(right - left) <= 1e-9);
  }
}

TEST_CASE("log density agrees with density and stays finite far out") {
  const SwitchModel m(1.0, 1.0, 0.5);
  for (double t : {0.05, 0.5, 0.6, 3.0, 50.0}) {
    CHECK(ddm::log_fptd_addm_switch(t, m) == doctest::Approx(std::log(ddm::fptd_addm_switch(t, m))).epsilon(1e-12));
  }
  const SwitchModel strong(50.0, 1.0, 0.5);
  CHECK(std::isfinite(ddm::log_fptd_addm_switch(40.0, strong)));
  CHECK(std::isfinite(ddm::log_fptd_addm_switch(1e-3, SwitchModel(-40.0, 1.0, 0.5))));
}

TEST_CASE("score is the mu-derivative of the log density") {
  for (double mu : {-2.0, 0.0, 1.0, 4.0}) {
    for (double t : {0.1, 0.5, 0.8, 3.0}) {
      const double h = 1e-5;
      const double fd =
          (ddm::log_fptd_addm_switch(t, SwitchModel(mu + h, 1.0, 0.5)) -
           ddm::log_fptd_addm_switch(t, SwitchModel(mu - h, 1.0, 0.5))) / (2.0 * h);
      CHECK(ddm::score_addm_switch(t, SwitchModel(mu, 1.0, 0.5)) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("survival and truncated mean match quadrature of the density") {
  for (double mu : {-2.0, -0.3, 0.0, 1e-4, 1.0, 5.0}) {
    const SwitchModel m(mu, 1.0, 0.5);
    const double hit_early = oracle::finite([&](double t) { return ddm::fptd_addm_switch(t, m); }, 0.0, 0.5);
    const double mean_early = oracle::finite([&](double t) { return t * ddm::fptd_addm_switch(t, m); }, 0.0, 0.5);
    CHECK(ddm::survival_after_T(m) == doctest::Approx(1.0 - hit_early).epsilon(1e-12));
    CHECK(ddm::truncated_mean(m) == doctest::Approx(mean_early).epsilon(1e-11));
  }
}

TEST_CASE("TADA density: same as f before T, Levy-shaped tail after") {
  const SwitchModel m(2.0, 1.0, 0.5);
  for (double t : {0.1, 0.3, 0.5}) {
    CHECK(ddm::tada_density(t, m) == doctest::Approx(ddm::fptd_addm_switch(t, m)).epsilon(1e-13));
  }
  // after T the time-averaged drift is mu T / tau
  for (double t : {0.6, 1.0, 3.0}) {
    CHECK(ddm::tada_density(t, m) == doctest::Approx(oracle::hit(t, 2.0 * 0.5 / t, 1.0)).epsilon(1e-13));
    CHECK(ddm::log_tada_density(t, m) == doctest::Approx(std::log(ddm::tada_density(t, m))).epsilon(1e-13));
  }
}

TEST_CASE("TADA tail mass: closed form vs quadrature, and the mu T = b case") {
  for (double mu : {-1.0, 0.5, 2.0, 4.0}) {
    const SwitchModel m(mu, 1.0, 0.5);
    const double q = oracle::half_line([&](double t) { return ddm::tada_density(t, m); }, 0.5);
    CHECK(ddm::tada_tail_mass(m) == doctest::Approx(q).epsilon(1e-9));
  }
  for (double T : {0.25, 0.5, 2.0}) {
    for (double b : {0.5, 1.0, 3.0}) {
      const SwitchModel m(b / T, b, T);
      CHECK(std::fabs(ddm::tada_tail_mass(m) - std::sqrt(2.0 / (M_PI * T)) * b) <= 1e-8);
    }
  }
}

TEST_CASE("two-boundary density against the plain eigen series") {
  const double x0 = -0.2, upper = 1.5, lower = -1.5;
  for (double mu : {-0.8, 0.0, 1.0}) {
    for (double sigma : {0.7, 1.0}) {
      const TwoBoundaryModel m(x0, mu, sigma, upper, lower);
      // the upper density is the lower one of the mirrored problem
      const TwoBoundaryModel mirror(-x0, -mu, sigma, -lower, -upper);
      for (double t : {0.05, 0.2, 1.0, 4.0}) {
        CHECK(ddm::fptd_two_boundary(t, Boundary::kLower, m) ==
              doctest::Approx(oracle::two_boundary_lower(t, x0, mu, sigma, upper, lower)).epsilon(1e-9));
        CHECK(ddm::fptd_two_boundary(t, Boundary::kUpper, m) ==
              doctest::Approx(oracle::two_boundary_lower(t, -x0, -mu, sigma, -lower, -upper)).epsilon(1e-9));
        CHECK(ddm::fptd_two_boundary(t, Boundary::kUpper, m) ==
              doctest::Approx(ddm::fptd_two_boundary(t, Boundary::kLower, mirror)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("two-boundary masses add to one and give the gambler's-ruin choice probability") {
  for (double mu : {-0.8, 0.0, 1.0, 3.0}) {
    const TwoBoundaryModel m(-0.2, mu, 1.0, 1.5, -1.5);
    auto mass = [&](Boundary c) {
      const auto a = ddm::integrate([&](double t) { return ddm::fptd_two_boundary(t, c, m); }, 0.0, 1.0, 1e-12);
      const auto z = ddm::integrate_to_infinity([&](double t) { return ddm::fptd_two_boundary(t, c, m); }, 1.0, 1e-12);
      return a.value + z.value;
    };
    const double up = mass(Boundary::kUpper);
    const double lo = mass(Boundary::kLower);
    CHECK(up + lo == doctest::Approx(1.0).epsilon(1e-9));
    // P(upper) = (1 - exp(-2 mu y0)) / (1 - exp(-2 mu L)) with y0 = 1.3, L = 3
    const double p = mu == 0.0 ? 1.3 / 3.0 : -std::expm1(-2.0 * mu * 1.3) / -std::expm1(-2.0 * mu * 3.0);
    CHECK(up == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("two-boundary log density is finite for extreme arguments") {
  const TwoBoundaryModel m(0.0, 0.0, 1.0, 1.0, -1.0);
  CHECK(std::isfinite(ddm::log_fptd_two_boundary(1e-3, Boundary::kUpper, m)));
  CHECK(std::isfinite(ddm::log_fptd_two_boundary(200.0, Boundary::kUpper, m)));
  CHECK(ddm::log_fptd_two_boundary(0.7, Boundary::kLower, m) ==
        doctest::Approx(std::log(ddm::fptd_two_boundary(0.7, Boundary::kLower, m))).epsilon(1e-13));
  CHECK_THROWS(ddm::fptd_two_boundary(0.0, Boundary::kLower, m));
}
