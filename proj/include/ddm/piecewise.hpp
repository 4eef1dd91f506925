#pragma once

#include "ddm/analytic.hpp"
#include "ddm/drift.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddm {

class SpectralCache;

enum class Engine { kCrankNicolson, kSpectral };

const char* engine_name(Engine e);
Engine parse_engine(const std::string& s);

struct SolverConfig {
  // Grid spacing as a fraction of the boundary interval: upper - lower, or
  // upper - x0 when there is no lower boundary. One-sided grids coarsen
  // geometrically more than 4 sigma below x0.
  double space_step = 1e-3;
  double time_step = 1e-4;
  double horizon = 10.0;
  // Smallest spacing, at the absorbing walls, relative to the largest.
  double boundary_refinement = 0.02;
  // After t = 0 and every drift switch, steps start at time_step *
  // time_refinement and grow geometrically by step_growth.
  double time_refinement = 1e-4;
  double step_growth = 1.15;
  // Implicit-Euler half steps replacing the first Crank-Nicolson steps of
  // each segment.
  int startup_half_steps = 4;
  // Used by loglik_trial only; solve_forward is always Crank-Nicolson.
  Engine engine = Engine::kSpectral;
  double spectral_tol = 1e-10;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FptdCurve {
  std::vector<double> time_grid;
  std::vector<double> upper_flux;
  std::vector<double> lower_flux;  // empty for one-sided problems
  double residual_mass = 0.0;

  bool two_sided() const { return !lower_flux.empty(); }
  // Flux at t by linear interpolation between grid nodes.
  double flux_at(Boundary c, double t) const;
  // Trapezoid integral of the flux over the whole grid.
  double absorbed_mass(Boundary c) const;
};

// Forward-equation solve u_t = -mu(t) u_x + (sigma^2/2) u_xx with absorbing
// boundaries at upper (and lower, if given). One-sided problems use a
// reflecting far wall at x0 - 8 sigma sqrt(horizon).
FptdCurve solve_forward(const PiecewiseDrift& drift, double x0, double sigma, double upper,
                        std::optional<double> lower, const SolverConfig& cfg);

// log of the boundary-c hitting density at tau. Values below 1e-300 are
// floored. The Crank-Nicolson engine throws std::domain_error for tau beyond
// cfg.horizon; the spectral engine has no horizon. cache is only consulted by
// the spectral engine and may be null.
double loglik_trial(const PiecewiseDrift& drift, double x0, double sigma, double upper, double lower, double tau,
                    Boundary choice, const SolverConfig& cfg, SpectralCache* cache = nullptr);

inline constexpr double kLogFloor = -690.7755278982137;  // log(1e-300)

}  // namespace ddm
