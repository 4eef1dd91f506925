#include "ddm/spectral.hpp"

#include "ddm/piecewise.hpp"
#include "ddm/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddm {
namespace {

constexpr std::size_t kMinModes = 16;
constexpr std::size_t kMaxModes = 1024;

std::shared_ptr<SpectralCache::Mixing> build_mixing(double c, double width, std::size_t rows, std::size_t cols) {
  auto out = std::make_shared<SpectralCache::Mixing>();
  out->rows = rows;
  out->cols = cols;
  out->m.assign(rows * cols, 0.0);
  if (c == 0.0) {
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) out->m[i * cols + i] = 1.0;
    return out;
  }
  // For c > 0 the common factor exp(cL) is moved into log_scale.
  const double cl = c * width;
  const bool factored = c > 0.0;
  const double e = factored ? std::exp(-cl) : std::exp(cl);
  const double diag_first = factored ? -std::expm1(-cl) / c : std::expm1(cl) / c;
  out->log_scale = factored ? cl : 0.0;
  const double c2 = c * c;
  const double w = kPi / width;
  for (std::size_t i = 0; i < rows; ++i) {
    const double m = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < cols; ++j) {
      const double n = static_cast<double>(j + 1);
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      const double front = factored ? c * (sign - e) : c * (sign * e - 1.0);
      const double plus = (m + n) * w;
      double value;
      if (i == j) {
        value = diag_first - front / (c2 + plus * plus);
      } else {
        const double minus = (m - n) * w;
        value = front * (1.0 / (c2 + minus * minus) - 1.0 / (c2 + plus * plus));
      }
      out->m[i * cols + j] = value / width;
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<const SpectralCache::Mixing> SpectralCache::mixing(double c, double width, std::size_t rows,
                                                                  std::size_t cols) {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[{c, width}];
  if (!slot || slot->rows < rows || slot->cols < cols) {
    // grow with slack so a slowly increasing request does not rebuild each time
    auto grow = [](std::size_t have, std::size_t want) {
      return have >= want ? have : std::min(kMaxModes, std::max(want, have + have / 2));
    };
    const std::size_t r = slot ? grow(slot->rows, rows) : rows;
    const std::size_t k = slot ? grow(slot->cols, cols) : cols;
    slot = build_mixing(c, width, r, k);
  }
  return slot;
}

std::size_t SpectralCache::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

std::size_t spectral_modes(double width, double sigma, double t, double tol) {
  const double diff = 0.5 * sigma * sigma;
  const double k = width / kPi * std::sqrt(std::log(1.0 / tol) / (diff * t)) + 2.0;
  if (!(k < static_cast<double>(kMaxModes))) return kMaxModes;
  return std::max(kMinModes, static_cast<std::size_t>(std::ceil(k)));
}

double spectral_log_flux(const PiecewiseDrift& drift, double x0, double sigma, double upper, double lower, double tau,
                         Boundary choice, double tol, SpectralCache* cache) {
  if (!(tau > 0.0)) throw std::domain_error("spectral_log_flux: tau must be positive");
  if (!(lower < x0 && x0 < upper) || !(sigma > 0.0)) throw std::invalid_argument("spectral_log_flux: bad geometry");

  std::vector<double> edges{0.0};
  for (double s : drift.switch_times()) {
    if (s >= tau) break;
    edges.push_back(s);
  }
  edges.push_back(tau);
  const std::size_t segs = edges.size() - 1;
  if (segs == 1) {
    return log_fptd_two_boundary(tau, choice, TwoBoundaryModel(x0, drift.values()[0], sigma, upper, lower));
  }

  const double width = upper - lower;
  const double s2 = sigma * sigma;
  const double diff = 0.5 * s2;
  std::vector<std::size_t> modes(segs);
  for (std::size_t j = 0; j < segs; ++j) modes[j] = spectral_modes(width, sigma, edges[j + 1] - edges[j], tol);

  SpectralCache local;
  SpectralCache& mix_cache = cache ? *cache : local;

  const double y0 = x0 - lower;
  const double w = kPi / width;
  std::size_t k = modes[0];
  std::vector<double> a(k), next;
  for (std::size_t i = 0; i < k; ++i) a[i] = 2.0 / width * std::sin(static_cast<double>(i + 1) * w * y0);
  const std::vector<double>& values = drift.values();
  double log_scale = -values[0] * y0 / s2;

  double mu = values[0];
  for (std::size_t j = 0; j < segs; ++j) {
    mu = drift.at(edges[j]);
    const double dt = edges[j + 1] - edges[j];
    for (std::size_t i = 0; i < k; ++i) {
      const double kw = static_cast<double>(i + 1) * w;
      a[i] *= std::exp(-diff * kw * kw * dt);
    }
    log_scale -= mu * mu * dt / (2.0 * s2);
    if (j + 1 == segs) break;

    // modes beyond k are negligible after this segment; the next segment
    // needs modes[j + 1] of them
    const std::size_t k_next = modes[j + 1];
    const double mu_next = drift.at(edges[j + 1]);
    const auto mix = mix_cache.mixing((mu - mu_next) / s2, width, k_next, k);
    const std::size_t stride = mix->cols;
    next.assign(k_next, 0.0);
    double peak = 0.0;
    for (std::size_t r = 0; r < k_next; ++r) {
      const double* row = mix->m.data() + r * stride;
      double acc = 0.0;
      for (std::size_t i = 0; i < k; ++i) acc += row[i] * a[i];
      next[r] = acc;
      peak = std::max(peak, std::fabs(acc));
    }
    log_scale += mix->log_scale;
    if (peak > 0.0) {
      for (double& v : next) v /= peak;
      log_scale += std::log(peak);
    }
    a.swap(next);
    k = k_next;
  }

  double sum = 0.0;
  if (choice == Boundary::kLower) {
    for (std::size_t i = 0; i < k; ++i) sum += a[i] * static_cast<double>(i + 1);
  } else {
    for (std::size_t i = 0; i < k; ++i) sum -= (i % 2 == 0 ? -1.0 : 1.0) * a[i] * static_cast<double>(i + 1);
    log_scale += mu * width / s2;
  }
  if (!(sum > 0.0)) return kLogFloor;
  return log_scale + std::log(diff * w * sum);
}

}  // namespace ddm
