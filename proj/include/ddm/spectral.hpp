#pragma once

#include "ddm/analytic.hpp"
#include "ddm/drift.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace ddm {

// Eigen-expansion of the two-boundary forward equation. On [lower, upper] with
// y = x - lower and width L, the density within a constant-drift segment is
//   p(y, t) = exp(s) exp(mu y / sigma^2) sum_k a_k sin(k pi y / L)
// and each a_k decays as exp(-D (k pi / L)^2 t). A drift switch multiplies the
// sine series by exp(c y), c = (mu_old - mu_new) / sigma^2, which is a dense
// but closed-form change of coefficients; those matrices are cached per c.
class SpectralCache {
 public:
  struct Mixing {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> m;  // row-major rows x cols
    double log_scale = 0.0;
  };

  // Thread-safe. The returned matrix has at least rows x cols entries and is
  // never mutated; entries do not depend on the stored size.
  std::shared_ptr<const Mixing> mixing(double c, double width, std::size_t rows, std::size_t cols);

  std::size_t entries() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<double, double>, std::shared_ptr<const Mixing>> cache_;
};

// Number of modes whose decay over a segment of duration t leaves the rest
// below tol.
std::size_t spectral_modes(double width, double sigma, double t, double tol);

// log of the boundary-c hitting density at tau under piecewise drift.
// Falls back to the closed-form series while tau is in the first segment.
double spectral_log_flux(const PiecewiseDrift& drift, double x0, double sigma, double upper, double lower, double tau,
                         Boundary choice, double tol, SpectralCache* cache);

}  // namespace ddm
