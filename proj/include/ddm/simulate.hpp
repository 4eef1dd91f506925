#pragma once

#include "ddm/analytic.hpp"
#include "ddm/drift.hpp"
#include "ddm/rng.hpp"

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace ddm {

enum class Option { kA, kB };

const char* option_name(Option o);

struct Fixation {
  Option option;
  double duration;
};

using FixationTrajectory = std::vector<Fixation>;

// Gamma(shape, rate) fixation durations. The default rate was found with
// tools/calibrate_fixations so that trials of the alternating (1, -0.8) model
// between +-1.5 from -0.2 average 3.806 fixations.
struct FixationConfig {
  double shape = 2.0;
  double rate = 3.2894;
};

// Alternating A/B fixations with i.i.d. gamma durations, first option a fair
// coin. Produces segments on demand, so trajectories extend past any horizon.
class FixationSampler {
 public:
  FixationSampler(RngSeed seed, const FixationConfig& cfg);
  Fixation next();

 private:
  Philox engine_;
  FixationConfig cfg_;
  Option current_;
  bool started_ = false;
};

// Segments covering at least [0, horizon].
FixationTrajectory sample_fixations(RngSeed seed, const FixationConfig& cfg, double horizon);

std::pair<int, int> sample_ratings(RngSeed seed);

struct ADDMParams {
  double eta;
  double kappa;
  double u;
  double x0;
  double sigma = 1.0;
  ADDMParams(double eta, double kappa, double u, double x0, double sigma = 1.0);
};

struct Trial {
  double tau = 0.0;
  Boundary choice = Boundary::kUpper;
  FixationTrajectory fixations;  // consumed prefix; durations sum to tau
  int r_a = 0;
  int r_b = 0;
};

// Drift kappa (r_a - eta r_b) while A is fixated and kappa (eta r_a - r_b)
// while B is.
double addm_drift_value(Option o, int r_a, int r_b, double eta, double kappa);
PiecewiseDrift drift_from_fixations(const FixationTrajectory& fix, double mu_a, double mu_b);
PiecewiseDrift addm_drift(const Trial& t, double eta, double kappa);

// Euler-Maruyama with step dt for the switch model; the crossing time is the
// first grid time with X >= b. After T + exact_tail_after the drift is zero
// and the remaining passage time is drawn exactly (it has infinite mean), then
// rounded up to the grid.
double simulate_one_boundary(const SwitchModel& m, double dt, RngSeed seed, double exact_tail_after = 1.0);

// n independent draws, draw i on stream i.
std::vector<double> simulate_one_boundary_dataset(std::size_t n, const SwitchModel& m, double dt, std::uint64_t seed,
                                                  double exact_tail_after = 1.0);

// Exact draw from the switch model's hitting law (no time discretisation).
double sample_switch_exact(const SwitchModel& m, RngSeed seed);

// Euler-Maruyama to the first exit from (lower, upper). max_time guards
// against non-terminating parameter choices; a trial still inside at max_time
// returns tau = inf.
std::pair<double, Boundary> simulate_two_boundary(const PiecewiseDrift& drift, double x0, double sigma, double upper,
                                                  double lower, double dt, RngSeed seed,
                                                  double max_time = std::numeric_limits<double>::infinity());

// Two-boundary trials whose drift is mu_a / mu_b according to the gaze.
std::vector<Trial> simulate_alternating_dataset(std::size_t n, double mu_a, double mu_b, double x0, double sigma,
                                                double upper, double lower, double dt, std::uint64_t seed,
                                                const FixationConfig& fix = {});

std::vector<Trial> simulate_addm_dataset(std::size_t n, const ADDMParams& p, double dt, std::uint64_t seed,
                                         const FixationConfig& fix = {});

}  // namespace ddm
