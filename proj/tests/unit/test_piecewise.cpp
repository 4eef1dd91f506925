#include "ddm/piecewise.hpp"
#include "ddm/spectral.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

using ddm::Boundary;
using ddm::PiecewiseDrift;
using ddm::SolverConfig;

namespace {

SolverConfig coarse(double factor, double horizon) {
  SolverConfig c;
  c.space_step *= factor;
  c.time_step *= factor;
  c.horizon = horizon;
  return c;
}

double sup_error_const(const ddm::FptdCurve& c, double mu, double a, double b) {
  double e = 0.0;
  for (std::size_t i = 0; i < c.time_grid.size(); ++i) {
    const double t = c.time_grid[i];
    if (t >= a && t <= b) e = std::max(e, std::fabs(c.upper_flux[i] - oracle::hit(t, mu, 1.0)));
  }
  return e;
}

const PiecewiseDrift kAlternating({0.3, 0.7, 1.1}, {1.0, -0.8, 1.0, -0.8});

}  // namespace

TEST_CASE("engine names") {
  CHECK(ddm::parse_engine("pde") == ddm::Engine::kCrankNicolson);
  CHECK(ddm::parse_engine("cn") == ddm::Engine::kCrankNicolson);
  CHECK(ddm::parse_engine("spectral") == ddm::Engine::kSpectral);
  CHECK_THROWS(ddm::parse_engine("euler"));
  CHECK(std::string(ddm::engine_name(ddm::Engine::kSpectral)) == "spectral");
}

TEST_CASE("second-order self-convergence on the constant-drift problem") {
  const auto c4 = ddm::solve_forward(PiecewiseDrift::constant(1.0), 0.0, 1.0, 1.0, std::nullopt, coarse(4.0, 3.0));
  const auto c2 = ddm::solve_forward(PiecewiseDrift::constant(1.0), 0.0, 1.0, 1.0, std::nullopt, coarse(2.0, 3.0));
  const double e4 = sup_error_const(c4, 1.0, 0.05, 3.0);
  const double e2 = sup_error_const(c2, 1.0, 0.05, 3.0);
  CHECK(e2 < 1e-4);
  CHECK(e4 / e2 > 3.0);
  CHECK(e4 / e2 < 5.0);
}

TEST_CASE("mass balance, nonnegative flux and translation invariance (4 segments, two boundaries)") {
  const auto cfg = coarse(1.0, 4.0);
  const auto a = ddm::solve_forward(kAlternating, -0.2, 1.0, 1.5, -1.5, cfg);
  REQUIRE(a.two_sided());
  CHECK(a.absorbed_mass(Boundary::kUpper) + a.absorbed_mass(Boundary::kLower) + a.residual_mass ==
        doctest::Approx(1.0).epsilon(1e-5));
  double peak = 0.0;
  for (std::size_t i = 0; i < a.time_grid.size(); ++i) peak = std::max({peak, a.upper_flux[i], a.lower_flux[i]});
  for (std::size_t i = 10; i < a.time_grid.size(); ++i) {
    CHECK(a.upper_flux[i] >= -1e-8 * peak);
    CHECK(a.lower_flux[i] >= -1e-8 * peak);
  }

  const double shift = 3.7;
  const auto b = ddm::solve_forward(kAlternating, -0.2 + shift, 1.0, 1.5 + shift, -1.5 + shift, cfg);
  REQUIRE(a.time_grid == b.time_grid);
  for (std::size_t i = 0; i < a.time_grid.size(); ++i) {
    CHECK(std::fabs(a.upper_flux[i] - b.upper_flux[i]) <= 1e-10);
    CHECK(std::fabs(a.lower_flux[i] - b.lower_flux[i]) <= 1e-10);
  }
  CHECK(std::fabs(a.residual_mass - b.residual_mass) <= 1e-10);
}

TEST_CASE("drift switches land on time-grid nodes") {
  const auto c = ddm::solve_forward(kAlternating, -0.2, 1.0, 1.5, -1.5, coarse(4.0, 2.0));
  for (double s : kAlternating.switch_times()) {
    CHECK(std::find(c.time_grid.begin(), c.time_grid.end(), s) != c.time_grid.end());
  }
  CHECK(c.time_grid.front() == 0.0);
  CHECK(c.time_grid.back() == 2.0);
}

TEST_CASE("solver configuration errors") {
  SolverConfig bad;
  bad.space_step = 0.0;
  CHECK_THROWS(ddm::solve_forward(PiecewiseDrift::constant(1.0), 0.0, 1.0, 1.0, std::nullopt, bad));
  CHECK_THROWS(ddm::solve_forward(PiecewiseDrift::constant(1.0), 2.0, 1.0, 1.0, std::nullopt, SolverConfig{}));
  CHECK_THROWS(ddm::solve_forward(PiecewiseDrift::constant(1.0), 0.0, 1.0, 1.0, 0.5, SolverConfig{}));
  // a breakpoint too close to the next one to be resolved
  const PiecewiseDrift tiny({0.5, 0.5 + 1e-14}, {1.0, 2.0, 1.0});
  CHECK_THROWS_AS(ddm::solve_forward(tiny, 0.0, 1.0, 1.0, -1.0, coarse(4.0, 1.0)), ddm::SolverError);
}

TEST_CASE("loglik_trial: both engines against the constant-drift series") {
  const ddm::TwoBoundaryModel m(-0.2, 0.6, 1.0, 1.5, -1.5);
  for (auto engine : {ddm::Engine::kCrankNicolson, ddm::Engine::kSpectral}) {
    SolverConfig cfg = coarse(2.0, 10.0);
    cfg.engine = engine;
    for (double tau : {0.2, 0.9, 2.5}) {
      for (Boundary c : {Boundary::kUpper, Boundary::kLower}) {
        const double ref = ddm::log_fptd_two_boundary(tau, c, m);
        CHECK(ddm::loglik_trial(PiecewiseDrift::constant(0.6), -0.2, 1.0, 1.5, -1.5, tau, c, cfg) ==
              doctest::Approx(ref).epsilon(1e-3));
      }
    }
  }
}

TEST_CASE("loglik_trial: tau before the first switch uses the first drift") {
  const PiecewiseDrift d({1.0}, {0.6, -2.0});
  SolverConfig cfg = coarse(2.0, 10.0);
  cfg.engine = ddm::Engine::kCrankNicolson;
  const double ref = ddm::log_fptd_two_boundary(0.7, Boundary::kUpper, ddm::TwoBoundaryModel(-0.2, 0.6, 1.0, 1.5, -1.5));
  CHECK(ddm::loglik_trial(d, -0.2, 1.0, 1.5, -1.5, 0.7, Boundary::kUpper, cfg) == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("loglik_trial: grid refinement changes the result by less than 1e-3") {
  SolverConfig a = coarse(4.0, 10.0);
  SolverConfig b = coarse(2.0, 10.0);
  a.engine = b.engine = ddm::Engine::kCrankNicolson;
  for (double tau : {0.45, 1.3}) {
    const double la = ddm::loglik_trial(kAlternating, -0.2, 1.0, 1.5, -1.5, tau, Boundary::kLower, a);
    const double lb = ddm::loglik_trial(kAlternating, -0.2, 1.0, 1.5, -1.5, tau, Boundary::kLower, b);
    CHECK(std::fabs(la - lb) < 1e-3);
  }
}

TEST_CASE("loglik_trial: horizon and floor") {
  SolverConfig cfg;
  cfg.engine = ddm::Engine::kCrankNicolson;
  cfg.horizon = 1.0;
  CHECK_THROWS_AS(ddm::loglik_trial(kAlternating, -0.2, 1.0, 1.5, -1.5, 1.5, Boundary::kUpper, cfg), std::domain_error);
  // a strong downward drift makes the upper density underflow
  SolverConfig s;
  const double v = ddm::loglik_trial(PiecewiseDrift({0.1}, {-200.0, -201.0}), 0.0, 1.0, 1.0, -1.0, 5.0,
                                     Boundary::kUpper, s);
  CHECK(v >= ddm::kLogFloor);
  CHECK(std::isfinite(v));
}

TEST_CASE("spectral engine agrees with Crank-Nicolson under switching drift") {
  const auto curve = ddm::solve_forward(kAlternating, -0.2, 1.0, 1.5, -1.5, coarse(1.0, 3.0));
  double worst = 0.0;
  for (double tau : {0.35, 0.69, 0.71, 1.0, 1.4, 2.8}) {
    for (Boundary c : {Boundary::kUpper, Boundary::kLower}) {
      const double spec = std::exp(ddm::spectral_log_flux(kAlternating, -0.2, 1.0, 1.5, -1.5, tau, c, 1e-10, nullptr));
      worst = std::max(worst, std::fabs(spec - curve.flux_at(c, tau)));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("spectral engine reproduces the one-boundary switch density when the lower wall is far") {
  // the lower wall at -12 removes a negligible amount of probability
  const PiecewiseDrift d({0.5}, {2.0, 0.0});
  const ddm::SwitchModel m(2.0, 1.0, 0.5);
  for (double tau : {0.6, 1.0, 3.0}) {
    const double spec = ddm::spectral_log_flux(d, 0.0, 1.0, 1.0, -12.0, tau, Boundary::kUpper, 1e-12, nullptr);
    CHECK(std::exp(spec) == doctest::Approx(ddm::fptd_addm_switch(tau, m)).epsilon(1e-8));
  }
}

TEST_CASE("spectral cache does not change results") {
  ddm::SpectralCache cache;
  for (double tau : {0.5, 2.0, 1.2}) {
    const double a = ddm::spectral_log_flux(kAlternating, -0.2, 1.0, 1.5, -1.5, tau, Boundary::kUpper, 1e-10, &cache);
    const double b = ddm::spectral_log_flux(kAlternating, -0.2, 1.0, 1.5, -1.5, tau, Boundary::kUpper, 1e-10, nullptr);
    CHECK(a == b);
  }
  CHECK(cache.entries() == 2);
  CHECK(ddm::spectral_modes(3.0, 1.0, 1e-6, 1e-10) == 1024);
  CHECK(ddm::spectral_modes(3.0, 1.0, 100.0, 1e-10) == 16);
}
