#include "ddm/piecewise.hpp"

#include "ddm/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace ddm {
namespace {

// Nodes on [left, right]. Spacing is h near the start point, shrinks smoothly
// to h_min at absorbing walls (the boundary layer after a drift switch is
// thin) and, for one-sided problems, grows linearly below `core` where little
// of the mass that can still reach the wall lives.
std::vector<double> build_nodes(double left, double right, bool absorbing_left, double h, double h_min,
                                double layer, double core, double growth_length) {
  auto spacing = [&](double d) {
    double s = h_min + (h - h_min) * -std::expm1(-d / layer);
    const double below = core - (right - d);
    if (!absorbing_left && below > 0.0) s *= 1.0 + below / growth_length;
    return s;
  };
  // distances from the upper wall, marched then stretched so the last one
  // lands exactly on the half width (two walls) or full width
  const double span = absorbing_left ? 0.5 * (right - left) : right - left;
  std::vector<double> d{0.0};
  while (d.back() < span) d.push_back(d.back() + spacing(d.back()));
  if (d.size() < 3) d = {0.0, 0.5 * span, span};
  const double scale = span / d.back();
  for (double& v : d) v *= scale;
  d.back() = span;

  std::vector<double> x;
  if (absorbing_left) {
    for (double v : d) x.push_back(left + v);
    for (std::size_t i = d.size() - 1; i-- > 0;) x.push_back(right - d[i]);
  } else {
    for (std::size_t i = d.size(); i-- > 0;) x.push_back(right - d[i]);
    x.front() = left;
  }
  return x;
}

// Tridiagonal A = I - (k/2) L for the three-point advection-diffusion operator
// L on a nonuniform grid, factorised once per (drift, step) pair. Unknowns are
// nodes first..first+n-1; the nodes outside that range are absorbing (u = 0).
class CnOperator {
 public:
  CnOperator(const std::vector<double>& x, std::size_t first, std::size_t n, bool reflecting_left, double mu,
             double diff, double k)
      : sub_(n), diag_(n), sup_(n), cprime_(n), denom_(n), half_(0.5 * k) {
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t i = first + r;
      if (i == 0) {
        // reflecting wall: ghost node u_{-1} = u_1 - 2 h mu u_0 / D
        const double h = x[1] - x[0];
        sub_[r] = 0.0;
        diag_[r] = -2.0 * diff / (h * h) - 2.0 * mu / h - mu * mu / diff;
        sup_[r] = 2.0 * diff / (h * h);
        continue;
      }
      const double hl = x[i] - x[i - 1];
      const double hr = x[i + 1] - x[i];
      sub_[r] = (mu * hr + 2.0 * diff) / (hl * (hl + hr));
      diag_[r] = -(mu * (hr - hl) + 2.0 * diff) / (hl * hr);
      sup_[r] = (2.0 * diff - mu * hl) / (hr * (hl + hr));
    }
    (void)reflecting_left;
    for (std::size_t r = 0; r < n; ++r) {
      const double lo = r == 0 ? 0.0 : -half_ * sub_[r];
      const double di = 1.0 - half_ * diag_[r];
      const double up = -half_ * sup_[r];
      const double den = r == 0 ? di : di - lo * cprime_[r - 1];
      denom_[r] = den;
      cprime_[r] = up / den;
    }
  }

  // out = (I + half * L) u
  void explicit_half(const std::vector<double>& u, std::vector<double>& out) const {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
      double lu = diag_[i] * u[i];
      if (i > 0) lu += sub_[i] * u[i - 1];
      if (i + 1 < n) lu += sup_[i] * u[i + 1];
      out[i] = u[i] + half_ * lu;
    }
  }

  // solves (I - half * L) x = r in place
  void implicit_half(std::vector<double>& r) const {
    const std::size_t n = r.size();
    r[0] /= denom_[0];
    for (std::size_t i = 1; i < n; ++i) r[i] = (r[i] + half_ * sub_[i] * r[i - 1]) / denom_[i];
    for (std::size_t i = n - 1; i-- > 0;) r[i] -= cprime_[i] * r[i + 1];
  }

 private:
  std::vector<double> sub_, diag_, sup_, cprime_, denom_;
  double half_;
};

// Step sizes covering a segment of length len: geometric growth from
// k_start up to k, then uniform steps that end exactly on the segment edge.
std::vector<double> segment_steps(double len, double k, double k_start, double growth) {
  std::vector<double> steps;
  double done = 0.0;
  double next = std::min(k_start, k);
  while (next < k) {
    if (done + next >= len) break;
    steps.push_back(next);
    done += next;
    next *= growth;
  }
  const double rest = len - done;
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(rest / k - 1e-9)));
  for (std::size_t j = 0; j < count; ++j) steps.push_back(rest / static_cast<double>(count));
  return steps;
}

}  // namespace

const char* engine_name(Engine e) { return e == Engine::kSpectral ? "spectral" : "pde"; }

Engine parse_engine(const std::string& s) {
  if (s == "spectral") return Engine::kSpectral;
  if (s == "pde" || s == "cn") return Engine::kCrankNicolson;
  throw std::invalid_argument("unknown engine '" + s + "' (expected pde or spectral)");
}

double FptdCurve::flux_at(Boundary c, double t) const {
  const std::vector<double>& f = c == Boundary::kUpper ? upper_flux : lower_flux;
  if (f.empty()) return 0.0;
  if (t <= time_grid.front()) return f.front();
  if (t >= time_grid.back()) return f.back();
  const auto it = std::upper_bound(time_grid.begin(), time_grid.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - time_grid.begin());
  const double w = (t - time_grid[j - 1]) / (time_grid[j] - time_grid[j - 1]);
  return (1.0 - w) * f[j - 1] + w * f[j];
}

double FptdCurve::absorbed_mass(Boundary c) const {
  const std::vector<double>& f = c == Boundary::kUpper ? upper_flux : lower_flux;
  double acc = 0.0;
  for (std::size_t j = 1; j < f.size(); ++j) acc += 0.5 * (f[j] + f[j - 1]) * (time_grid[j] - time_grid[j - 1]);
  return acc;
}

FptdCurve solve_forward(const PiecewiseDrift& drift, double x0, double sigma, double upper,
                        std::optional<double> lower, const SolverConfig& cfg) {
  if (!(sigma > 0.0)) throw std::invalid_argument("solve_forward: sigma must be positive");
  if (!(x0 < upper) || (lower && !(*lower < x0))) throw std::invalid_argument("solve_forward: need lower < x0 < upper");
  if (!(cfg.space_step > 0.0 && cfg.space_step < 0.5) || !(cfg.time_step > 0.0) || !(cfg.horizon > 0.0) ||
      !(cfg.boundary_refinement > 0.0 && cfg.boundary_refinement <= 1.0) ||
      !(cfg.time_refinement > 0.0 && cfg.time_refinement <= 1.0) || !(cfg.step_growth > 1.0)) {
    throw std::invalid_argument("solve_forward: invalid solver configuration");
  }
  const bool two_sided = lower.has_value();
  const double diff = 0.5 * sigma * sigma;
  const double left = two_sided ? *lower : x0 - 8.0 * sigma * std::sqrt(cfg.horizon);
  const double h = cfg.space_step * (two_sided ? upper - left : upper - x0);
  const double layer = std::max(5.0 * h, 10.0 * std::sqrt(diff * cfg.time_step));
  const std::vector<double> x =
      build_nodes(left, upper, two_sided, h, cfg.boundary_refinement * h, layer, x0 - 4.0 * sigma, sigma);
  const std::size_t last = x.size() - 1;  // absorbing upper node

  // unknowns: nodes 1..last-1 (two-sided) or 0..last-1 (reflecting left wall)
  const std::size_t first = two_sided ? 1 : 0;
  const std::size_t n = last - first;
  std::vector<double> weight(n);  // control-volume widths
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = first + r;
    weight[r] = 0.5 * ((i > 0 ? x[i] - x[i - 1] : 0.0) + (x[i + 1] - x[i]));
  }
  std::vector<double> u(n, 0.0), scratch(n, 0.0);

  // two-node delta with linear-interpolation weights
  {
    const auto it = std::upper_bound(x.begin(), x.end(), x0);
    const auto j = static_cast<std::size_t>(it - x.begin()) - 1;
    const double theta = (x0 - x[j]) / (x[j + 1] - x[j]);
    if (j >= first) u[j - first] += (1.0 - theta) / weight[j - first];
    if (j + 1 < last) u[j + 1 - first] += theta / weight[j + 1 - first];
  }

  // second-order one-sided derivative at a wall where u = 0, from the two
  // nearest interior values at distances d1 < d2
  auto wall_slope = [](double u1, double d1, double u2, double d2) {
    return (u1 * d2 * d2 - u2 * d1 * d1) / (d1 * d2 * (d2 - d1));
  };
  auto upper_flux = [&]() {
    return diff * wall_slope(u[n - 1], x[last] - x[last - 1], u[n - 2], x[last] - x[last - 2]);
  };
  auto lower_flux = [&]() { return diff * wall_slope(u[0], x[1] - x[0], u[1], x[2] - x[0]); };

  FptdCurve out;
  out.time_grid.push_back(0.0);
  out.upper_flux.push_back(0.0);
  if (two_sided) out.lower_flux.push_back(0.0);

  std::vector<double> edges{0.0};
  for (double s : drift.switch_times()) {
    if (s >= cfg.horizon) break;
    edges.push_back(s);
  }
  edges.push_back(cfg.horizon);

  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double t0 = edges[seg];
    const double len = edges[seg + 1] - t0;
    if (!(len > 1e-12)) throw SolverError("solve_forward: drift segment too short for the time grid");
    const double mu = drift.at(t0);
    // each drift change restarts from incompatible data: graded steps, with
    // the first few done as pairs of implicit-Euler half steps
    const std::vector<double> steps =
        segment_steps(len, cfg.time_step, cfg.time_step * cfg.time_refinement, cfg.step_growth);
    int startup_left = std::max(0, cfg.startup_half_steps);
    double t = t0;
    std::optional<CnOperator> op;
    double op_step = -1.0;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      if (steps[s] != op_step) {
        op.emplace(x, first, n, !two_sided, mu, diff, steps[s]);
        op_step = steps[s];
      }
      if (startup_left > 0) {
        // implicit Euler with step k/2 has the same matrix as CN with step k
        op->implicit_half(u);
        op->implicit_half(u);
        startup_left -= 2;
      } else {
        op->explicit_half(u, scratch);
        op->implicit_half(scratch);
        u.swap(scratch);
      }
      t = s + 1 == steps.size() ? edges[seg + 1] : t + steps[s];
      out.time_grid.push_back(t);
      out.upper_flux.push_back(upper_flux());
      if (two_sided) out.lower_flux.push_back(lower_flux());
    }
  }

  double mass = 0.0;
  for (std::size_t r = 0; r < n; ++r) mass += u[r] * weight[r];
  out.residual_mass = mass;
  if (!std::isfinite(out.residual_mass) || out.residual_mass < -1e-6) {
    throw SolverError("solve_forward: residual mass diverged");
  }
  return out;
}

double loglik_trial(const PiecewiseDrift& drift, double x0, double sigma, double upper, double lower, double tau,
                    Boundary choice, const SolverConfig& cfg, SpectralCache* cache) {
  if (!(tau > 0.0)) throw std::domain_error("loglik_trial: tau must be positive");
  if (cfg.engine == Engine::kSpectral) {
    return std::max(kLogFloor, spectral_log_flux(drift, x0, sigma, upper, lower, tau, choice, cfg.spectral_tol, cache));
  }
  // only the time-stepping engine is limited to [0, horizon]
  if (tau > cfg.horizon) throw std::domain_error("loglik_trial: tau beyond solver horizon");
  SolverConfig local = cfg;
  local.horizon = tau;
  const FptdCurve curve = solve_forward(drift, x0, sigma, upper, lower, local);
  const double f = curve.flux_at(choice, tau);
  return f > 1e-300 ? std::log(f) : kLogFloor;
}

}  // namespace ddm
