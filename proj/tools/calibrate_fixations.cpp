// Finds the gamma rate (shape fixed) at which the two-boundary alternating
// model (1, -0.8), x0 = -0.2, boundaries +-1.5, averages a target number of
// fixations per trial. Common random numbers across candidate rates make the
// mean monotone in the rate, so plain bisection works.
#include "ddm/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>

int main(int argc, char** argv) {
  CLI::App app{"calibrate the fixation-duration rate"};
  double target = 3.806;
  double shape = 2.0;
  double lo = 0.5, hi = 20.0;
  std::size_t n = 20000;
  double dt = 1e-4;
  std::uint64_t seed = 7;
  int steps = 30;
  app.add_option("--target", target, "mean fixations per trial");
  app.add_option("--shape", shape, "gamma shape");
  app.add_option("--lo", lo, "lower rate bracket");
  app.add_option("--hi", hi, "upper rate bracket");
  app.add_option("--n", n, "trials per evaluation");
  app.add_option("--dt", dt, "Euler-Maruyama step");
  app.add_option("--seed", seed, "seed");
  app.add_option("--steps", steps, "bisection steps");
  CLI11_PARSE(app, argc, argv);

  auto mean_at = [&](double rate) {
    ddm::FixationConfig fix;
    fix.shape = shape;
    fix.rate = rate;
    const auto trials = ddm::simulate_alternating_dataset(n, 1.0, -0.8, -0.2, 1.0, 1.5, -1.5, dt, seed, fix);
    double total = 0.0;
    for (const auto& t : trials) total += static_cast<double>(t.fixations.size());
    return total / static_cast<double>(n);
  };
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean_at(mid);
    std::printf("rate %.10g  mean fixations %.5f\n", mid, m);
    std::fflush(stdout);
    (m < target ? lo : hi) = mid;
  }
  std::printf("rate %.10g\n", 0.5 * (lo + hi));
  return 0;
}
