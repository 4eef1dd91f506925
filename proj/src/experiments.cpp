#include "ddm/experiments.hpp"

#include "ddm/analytic.hpp"
#include "ddm/inference.hpp"
#include "ddm/quadrature.hpp"
#include "ddm/simulate.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifndef DDM_VERSION
#define DDM_VERSION "unknown"
#endif

namespace ddm {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("setting " + key + ": not a number: '" + v + "'");
  return out;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }
  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    for (double v : values) s.push_back(format_number(v));
    row_strings(s);
  }
  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text_.str();
  }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ << (i ? "," : "") << cells[i];
    text_ << '\n';
  }
  std::ostringstream text_;
};

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

nlohmann::ordered_json provenance(const std::string& name, const Settings& s) {
  nlohmann::ordered_json j;
  j["experiment"] = name;
  j["version"] = DDM_VERSION;
  j["settings"] = s.used();
  return j;
}

SolverConfig solver_from(Settings& s) {
  SolverConfig c;
  c.engine = parse_engine(s.text("solver.engine", engine_name(c.engine)));
  c.spectral_tol = s.number("solver.spectral_tol", c.spectral_tol);
  c.space_step = s.number("solver.space_step", c.space_step);
  c.time_step = s.number("solver.time_step", c.time_step);
  c.boundary_refinement = s.number("solver.boundary_refinement", c.boundary_refinement);
  c.time_refinement = s.number("solver.time_refinement", c.time_refinement);
  c.step_growth = s.number("solver.step_growth", c.step_growth);
  c.startup_half_steps = static_cast<int>(s.integer("solver.startup_half_steps", c.startup_half_steps));
  return c;
}

FitOptions fit_from(Settings& s) {
  FitOptions o;
  o.solver = solver_from(s);
  o.f_tol = s.number("fit.f_tol", o.f_tol);
  o.x_tol = s.number("fit.x_tol", o.x_tol);
  o.max_iterations = static_cast<int>(s.integer("fit.max_iterations", static_cast<std::uint64_t>(o.max_iterations)));
  o.compute_stderr = s.flag("fit.stderr", false);
  return o;
}

FixationConfig fixations_from(Settings& s) {
  FixationConfig f;
  f.shape = s.number("fixation.shape", f.shape);
  f.rate = s.number("fixation.rate", f.rate);
  return f;
}

std::string prepare(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

double mean_fixations(const std::vector<Trial>& trials) {
  double total = 0.0;
  for (const Trial& t : trials) total += static_cast<double>(t.fixations.size());
  return total / static_cast<double>(trials.size());
}

nlohmann::ordered_json result_json(const EstimationResult& r) { return nlohmann::ordered_json::parse(to_json(r)); }

}  // namespace

Settings Settings::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  Settings s;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    s.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return s;
}

void Settings::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw std::invalid_argument("empty setting key");
  values_[key] = value;
}

bool Settings::has(const std::string& key) const { return values_.count(key) != 0; }

double Settings::number(const std::string& key, double fallback) {
  const auto it = values_.find(key);
  const double v = it == values_.end() ? fallback : parse_double(key, it->second);
  touched_[key] = true;
  used_[key] = v;
  return v;
}

std::uint64_t Settings::integer(const std::string& key, std::uint64_t fallback) {
  const auto it = values_.find(key);
  std::uint64_t v = fallback;
  if (it != values_.end()) {
    // accept 1e5-style counts
    const double d = parse_double(key, it->second);
    if (!(d >= 0.0) || d != std::floor(d) || d > 9.007199254740992e15) {
      throw std::invalid_argument("setting " + key + ": not a non-negative integer: '" + it->second + "'");
    }
    v = static_cast<std::uint64_t>(d);
  }
  touched_[key] = true;
  used_[key] = v;
  return v;
}

std::string Settings::text(const std::string& key, const std::string& fallback) {
  const auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  touched_[key] = true;
  used_[key] = v;
  return v;
}

bool Settings::flag(const std::string& key, bool fallback) {
  const auto it = values_.find(key);
  bool v = fallback;
  if (it != values_.end()) {
    const std::string& t = it->second;
    if (t == "1" || t == "true" || t == "yes" || t == "on") {
      v = true;
    } else if (t == "0" || t == "false" || t == "no" || t == "off") {
      v = false;
    } else {
      throw std::invalid_argument("setting " + key + ": not a boolean: '" + t + "'");
    }
  }
  touched_[key] = true;
  used_[key] = v;
  return v;
}

std::vector<double> Settings::numbers(const std::string& key, const std::vector<double>& fallback) {
  const auto it = values_.find(key);
  std::vector<double> v = fallback;
  if (it != values_.end()) {
    v.clear();
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_double(key, trim(item)));
    if (v.empty()) throw std::invalid_argument("setting " + key + ": empty list");
  }
  touched_[key] = true;
  used_[key] = v;
  return v;
}

std::vector<std::string> Settings::unused() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!touched_.count(k)) out.push_back(k);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

ExperimentReport run_table1(Settings& s, const std::string& out_dir) {
  const std::uint64_t seed = s.integer("seed", 1);
  const double mu = s.number("mu", 1.0);
  const double b = s.number("b", 1.0);
  const double T = s.number("T", 0.5);
  const std::uint64_t n = s.integer("n", 100000);
  const double dt = s.number("dt", 1e-4);
  const double tail = s.number("exact_tail_after", 1.0);
  if (n == 0) throw std::invalid_argument("table1: n must be positive");

  const SwitchModel model(mu, b, T);
  const std::vector<double> taus = simulate_one_boundary_dataset(n, model, dt, seed, tail);
  const EstimationResult ml = mle_one_boundary(taus, b, T);
  const double tilde = asymptotic_tada_limit(model);
  const double tada = tada_estimator_closed_form(taus, b, T);

  const std::string base = prepare(out_dir, "table1");
  Csv csv({"mu_true", "mu_ml", "mu_tilde", "mu_tada"});
  csv.row({mu, ml.estimate[0], tilde, tada});
  csv.write(base + ".csv");

  auto j = provenance("table1", s);
  j["tolerances"] = {{"mle_root_width", 1e-12}, {"quadrature_abs_tol", 1e-10}};
  j["mle"] = result_json(ml);
  j["converged"] = ml.converged;
  write_json(base + ".json", j);
  return {ml.converged, {base + ".csv", base + ".json"}};
}

ExperimentReport run_table2(Settings& s, const std::string& out_dir) {
  const std::uint64_t seed = s.integer("seed", 1);
  const double mu1 = s.number("mu1", 1.0);
  const double mu2 = s.number("mu2", -0.8);
  const double sigma = s.number("sigma", 1.0);
  const double u = s.number("u", 1.5);
  const double x0 = s.number("x0", -0.2);
  const std::uint64_t n = s.integer("n", 10000);
  const double dt = s.number("dt", 1e-4);
  const FixationConfig fix = fixations_from(s);
  const FitOptions opt = fit_from(s);
  if (n == 0) throw std::invalid_argument("table2: n must be positive");

  const Geometry g{x0, sigma, u, -u};
  const std::vector<Trial> trials = simulate_alternating_dataset(n, mu1, mu2, x0, sigma, u, -u, dt, seed, fix);
  const EstimationResult tada = mle_two_boundary(trials, g, Method::kTada, opt);
  const EstimationResult ml = mle_two_boundary(trials, g, Method::kExact, opt);

  const std::string base = prepare(out_dir, "table2");
  Csv csv({"mu1_true", "mu1_ml", "mu1_tada", "mu2_true", "mu2_ml", "mu2_tada"});
  csv.row({mu1, ml.estimate[0], tada.estimate[0], mu2, ml.estimate[1], tada.estimate[1]});
  csv.write(base + ".csv");

  auto j = provenance("table2", s);
  j["tolerances"] = {{"nelder_mead_f_tol", opt.f_tol},
                     {"nelder_mead_x_tol", opt.x_tol},
                     {"spectral_tol", opt.solver.spectral_tol}};
  j["mean_fixations_per_trial"] = mean_fixations(trials);
  j["ml"] = result_json(ml);
  j["tada"] = result_json(tada);
  j["converged"] = ml.converged && tada.converged;
  write_json(base + ".json", j);
  return {ml.converged && tada.converged, {base + ".csv", base + ".json"}};
}

ExperimentReport run_fig1(Settings& s, const std::string& out_dir) {
  const double mu = s.number("mu", 2.0);
  const double b = s.number("b", 1.0);
  const double T = s.number("T", 0.5);
  const double t_max = s.number("t_max", 3.0);
  const std::uint64_t points = s.integer("points", 300);
  if (points == 0 || !(t_max > 0.0)) throw std::invalid_argument("fig1: need points > 0 and t_max > 0");

  const SwitchModel m(mu, b, T);
  const OneBoundaryModel c(0.0, mu, 1.0, b);
  const std::string base = prepare(out_dir, "fig1");
  Csv csv({"tau", "f_addm", "f_tada", "f_const"});
  for (std::uint64_t i = 1; i <= points; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(points);
    csv.row({t, fptd_addm_switch(t, m), tada_density(t, m), fptd_one_boundary(t, c)});
  }
  csv.write(base + ".csv");

  constexpr double tol = 1e-10;
  auto mass = [&](const Integrand& f) {
    const QuadResult a = integrate(f, 0.0, T, tol);
    const QuadResult z = integrate_to_infinity(f, T, tol);
    return std::make_pair(a.value + z.value, a.converged && z.converged);
  };
  const auto [m_addm, ok1] = mass([&](double t) { return fptd_addm_switch(t, m); });
  const auto [m_tada, ok2] = mass([&](double t) { return tada_density(t, m); });
  const auto [m_const, ok3] = mass([&](double t) { return fptd_one_boundary(t, c); });
  Csv masses({"mass_addm", "mass_tada", "mass_const"});
  masses.row({m_addm, m_tada, m_const});
  masses.write(base + "_mass.csv");

  const bool ok = ok1 && ok2 && ok3;
  auto j = provenance("fig1", s);
  j["tolerances"] = {{"quadrature_abs_tol", tol}};
  j["converged"] = ok;
  write_json(base + ".json", j);
  return {ok, {base + ".csv", base + "_mass.csv", base + ".json"}};
}

ExperimentReport run_fig2(Settings& s, const std::string& out_dir) {
  const bool paper = s.flag("paper_scale", false);
  std::vector<double> desk_grid{0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  std::vector<double> paper_grid;
  for (int i = 0; i <= 20; ++i) paper_grid.push_back(0.05 * i);
  const std::uint64_t seed = s.integer("seed", 1);
  const std::vector<double> grid = s.numbers("eta_grid", paper ? paper_grid : desk_grid);
  const std::uint64_t n = s.integer("n", paper ? 10000 : 1000);
  const double kappa = s.number("kappa", 0.5);
  const double u = s.number("u", 2.0);
  const double x0 = s.number("x0", 0.5);
  const double dt = s.number("dt", 1e-4);
  const FixationConfig fix = fixations_from(s);
  const FitOptions opt = fit_from(s);
  if (n == 0) throw std::invalid_argument("fig2: n must be positive");

  const std::string base = prepare(out_dir, "fig2");
  Csv csv({"eta_true", "eta_ml", "kappa_ml", "u_ml", "x0_ml", "eta_tada", "kappa_tada", "u_tada", "x0_tada",
           "converged_ml", "converged_tada"});
  auto j = provenance("fig2", s);
  j["tolerances"] = {{"nelder_mead_f_tol", opt.f_tol},
                     {"nelder_mead_x_tol", opt.x_tol},
                     {"spectral_tol", opt.solver.spectral_tol}};
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  bool all_ok = true;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double eta = grid[k];
    nlohmann::ordered_json p;
    p["eta_true"] = eta;
    // every grid point gets its own dataset seed
    const std::uint64_t point_seed = seed + k;
    p["seed"] = point_seed;
    std::vector<double> row{eta};
    bool ok_ml = false;
    bool ok_tada = false;
    try {
      const std::vector<Trial> trials = simulate_addm_dataset(n, ADDMParams(eta, kappa, u, x0), dt, point_seed, fix);
      const EstimationResult ml = fit_addm(trials, Method::kExact, opt);
      const EstimationResult td = fit_addm(trials, Method::kTada, opt);
      row.insert(row.end(), ml.estimate.begin(), ml.estimate.end());
      row.insert(row.end(), td.estimate.begin(), td.estimate.end());
      ok_ml = ml.converged;
      ok_tada = td.converged;
      p["ml"] = result_json(ml);
      p["tada"] = result_json(td);
    } catch (const std::exception& e) {
      row.resize(1);
      row.insert(row.end(), 8, nan);
      p["error"] = e.what();
    }
    row.push_back(ok_ml ? 1.0 : 0.0);
    row.push_back(ok_tada ? 1.0 : 0.0);
    csv.row(row);
    all_ok = all_ok && ok_ml && ok_tada;
    points.push_back(std::move(p));
  }
  csv.write(base + ".csv");
  j["points"] = std::move(points);
  j["converged"] = all_ok;
  write_json(base + ".json", j);
  return {all_ok, {base + ".csv", base + ".json"}};
}

}  // namespace ddm
