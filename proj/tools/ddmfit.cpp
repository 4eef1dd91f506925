// ddmfit: experiments and ad-hoc tools for drift-diffusion first-passage models.
#include "ddm/analytic.hpp"
#include "ddm/dataset_io.hpp"
#include "ddm/experiments.hpp"
#include "ddm/inference.hpp"
#include "ddm/piecewise.hpp"
#include "ddm/simulate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

struct Global {
  std::optional<std::uint64_t> seed;
  std::string out;
  bool paper_scale = false;
  std::string config;
  std::vector<std::string> sets;
};

ddm::Settings settings_from(const Global& g) {
  ddm::Settings s = g.config.empty() ? ddm::Settings() : ddm::Settings::from_file(g.config);
  for (const std::string& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
    s.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) s.set("seed", std::to_string(*g.seed));
  if (g.paper_scale) s.set("paper_scale", "true");
  return s;
}

// Writes to a file, or stdout when path is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int finish(const ddm::ExperimentReport& r, ddm::Settings& s) {
  for (const std::string& k : s.unused()) std::cerr << "warning: setting '" << k << "' was not used\n";
  for (const std::string& f : r.files) std::cout << f << '\n';
  if (!r.converged) std::cerr << "warning: not every fit converged\n";
  return r.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-diffusion first-passage densities, simulation and estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out", g.out, "output directory (experiments) or file (density, simulate, fit)");
  app.add_flag("--paper-scale", g.paper_scale, "full-size settings where they differ from the defaults");
  app.add_option("--config", g.config, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--set", g.sets, "override one setting, key=value (repeatable)");

  int code = 0;
  auto experiment = [&](const char* name, const char* help, ddm::ExperimentReport (*run)(ddm::Settings&,
                                                                                            const std::string&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&, run] {
      ddm::Settings s = settings_from(g);
      code = finish(run(s, g.out.empty() ? std::string("out") : g.out), s);
    });
  };
  experiment("table1", "one-boundary switch model: exact MLE, TADA estimate and its limit", ddm::run_table1);
  experiment("table2", "two-boundary alternating drift: exact MLE vs TADA", ddm::run_table2);
  experiment("fig1", "f_aDDM, f_TADA and constant-drift densities with their masses", ddm::run_fig1);
  experiment("fig2", "aDDM eta recovery sweep, exact vs TADA", ddm::run_fig2);

  // density
  auto* dens = app.add_subcommand("density", "evaluate a first-passage density on a time grid");
  std::string model = "addm";
  double mu = 1.0, b = 1.0, T = 0.5, x0 = 0.0, sigma = 1.0, upper = 1.0, lower = -1.0;
  double t_min = 0.01, t_max = 3.0;
  std::size_t points = 300;
  std::string boundary = "upper";
  std::string engine = "spectral";
  dens->add_option("--model", model, "addm | tada | const | two | pde")
      ->check(CLI::IsMember({"addm", "tada", "const", "two", "pde"}));
  dens->add_option("--mu", mu, "drift");
  dens->add_option("--b", b, "boundary (one-boundary models)");
  dens->add_option("--T", T, "drift switch-off time (addm, tada, pde)");
  dens->add_option("--x0", x0, "start (two)");
  dens->add_option("--sigma", sigma, "noise (const, two)");
  dens->add_option("--upper", upper, "upper boundary (two)");
  dens->add_option("--lower", lower, "lower boundary (two)");
  dens->add_option("--boundary", boundary, "upper | lower (two)")->check(CLI::IsMember({"upper", "lower"}));
  dens->add_option("--t-min", t_min, "first grid time");
  dens->add_option("--t-max", t_max, "last grid time");
  dens->add_option("--points", points, "grid size")->check(CLI::PositiveNumber);
  dens->callback([&] {
    if (!(t_min > 0.0) || !(t_max >= t_min)) throw CLI::ValidationError("--t-min/--t-max", "need 0 < t-min <= t-max");
    Sink sink(g.out);
    std::ostream& os = sink.os();
    os << "t,f\n";
    std::optional<ddm::FptdCurve> curve;
    if (model == "pde") {
      ddm::SolverConfig cfg;
      cfg.horizon = t_max;
      curve = ddm::solve_forward(ddm::PiecewiseDrift({T}, {mu, 0.0}), 0.0, 1.0, b, std::nullopt, cfg);
    }
    const ddm::Boundary c = boundary == "upper" ? ddm::Boundary::kUpper : ddm::Boundary::kLower;
    for (std::size_t i = 0; i < points; ++i) {
      const double t = points == 1 ? t_min : t_min + (t_max - t_min) * static_cast<double>(i) / (points - 1);
      double f = 0.0;
      if (model == "addm") {
        f = ddm::fptd_addm_switch(t, ddm::SwitchModel(mu, b, T));
      } else if (model == "tada") {
        f = ddm::tada_density(t, ddm::SwitchModel(mu, b, T));
      } else if (model == "const") {
        f = ddm::fptd_one_boundary(t, ddm::OneBoundaryModel(0.0, mu, sigma, b));
      } else if (model == "two") {
        f = ddm::fptd_two_boundary(t, c, ddm::TwoBoundaryModel(x0, mu, sigma, upper, lower));
      } else {
        f = curve->flux_at(ddm::Boundary::kUpper, t);
      }
      os << ddm::format_number(t) << ',' << ddm::format_number(f) << '\n';
    }
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a dataset as JSON lines");
  std::string kind = "addm";
  std::size_t n = 1000;
  double dt = 1e-3;
  double eta = 0.3, kappa = 0.5, u = 2.0, mu_a = 1.0, mu_b = -0.8;
  double sim_x0 = 0.5;
  ddm::FixationConfig fix;
  sim->add_option("--kind", kind, "addm | alternating | switch")->check(CLI::IsMember({"addm", "alternating", "switch"}));
  sim->add_option("--n", n, "number of trials")->check(CLI::PositiveNumber);
  sim->add_option("--dt", dt, "Euler-Maruyama step")->check(CLI::PositiveNumber);
  sim->add_option("--eta", eta, "attentional discount (addm)");
  sim->add_option("--kappa", kappa, "drift scale (addm)");
  sim->add_option("--u", u, "boundaries at +-u (addm, alternating)");
  sim->add_option("--x0", sim_x0, "start (addm, alternating)");
  sim->add_option("--mu-a", mu_a, "drift while A is fixated (alternating)");
  sim->add_option("--mu-b", mu_b, "drift while B is fixated (alternating)");
  sim->add_option("--mu", mu, "drift before T (switch)");
  sim->add_option("--b", b, "boundary (switch)");
  sim->add_option("--T", T, "switch-off time (switch)");
  sim->add_option("--fixation-shape", fix.shape, "gamma shape of fixation durations");
  sim->add_option("--fixation-rate", fix.rate, "gamma rate of fixation durations");
  sim->callback([&] {
    const std::uint64_t seed = g.seed.value_or(1);
    std::vector<ddm::Trial> trials;
    if (kind == "addm") {
      trials = ddm::simulate_addm_dataset(n, ddm::ADDMParams(eta, kappa, u, sim_x0), dt, seed, fix);
    } else if (kind == "alternating") {
      trials = ddm::simulate_alternating_dataset(n, mu_a, mu_b, sim_x0, 1.0, u, -u, dt, seed, fix);
    } else {
      for (double t : ddm::simulate_one_boundary_dataset(n, ddm::SwitchModel(mu, b, T), dt, seed)) {
        ddm::Trial tr;
        tr.tau = t;
        tr.choice = ddm::Boundary::kUpper;
        trials.push_back(std::move(tr));
      }
    }
    Sink sink(g.out);
    ddm::write_dataset(sink.os(), trials);
  });

  // fit
  auto* fit = app.add_subcommand("fit", "fit a dataset and print one JSON record");
  std::string data;
  std::string fit_model = "addm";
  std::string method = "exact";
  double fit_sigma = 1.0;
  fit->add_option("--data", data, "JSON-lines dataset")->required()->check(CLI::ExistingFile);
  fit->add_option("--model", fit_model, "switch | alternating | addm")
      ->check(CLI::IsMember({"switch", "alternating", "addm"}));
  fit->add_option("--method", method, "exact | tada")->check(CLI::IsMember({"exact", "tada"}));
  fit->add_option("--b", b, "boundary (switch)");
  fit->add_option("--T", T, "switch-off time (switch)");
  fit->add_option("--u", u, "boundaries at +-u (alternating)");
  fit->add_option("--x0", sim_x0, "start (alternating)");
  fit->add_option("--sigma", fit_sigma, "noise (alternating)");
  fit->add_option("--engine", engine, "likelihood engine for exact fits: spectral | pde")
      ->check(CLI::IsMember({"spectral", "pde", "cn"}));
  fit->callback([&] {
    const std::vector<ddm::Trial> trials = ddm::read_dataset(data);
    ddm::FitOptions opt;
    opt.solver.engine = ddm::parse_engine(engine);
    const ddm::Method m = ddm::parse_method(method);
    ddm::EstimationResult r;
    if (fit_model == "switch") {
      std::vector<double> taus;
      for (const auto& t : trials) taus.push_back(t.tau);
      if (m == ddm::Method::kExact) {
        r = ddm::mle_one_boundary(taus, b, T);
      } else {
        r.method = "tada";
        r.names = {"mu"};
        r.estimate = {ddm::tada_estimator_closed_form(taus, b, T)};
        r.nll = ddm::tada_nll_one_boundary(r.estimate[0], taus, b, T);
        r.converged = true;
      }
    } else if (fit_model == "alternating") {
      r = ddm::mle_two_boundary(trials, ddm::Geometry{sim_x0, fit_sigma, u, -u}, m, opt);
    } else {
      r = ddm::fit_addm(trials, m, opt);
    }
    Sink sink(g.out);
    sink.os() << ddm::to_json(r) << '\n';
    code = r.converged ? 0 : 2;
  });

  // limit
  auto* lim = app.add_subcommand("limit", "asymptotic TADA limit of the switch model");
  int digits = 3;
  lim->add_option("--mu", mu, "drift before T");
  lim->add_option("--b", b, "boundary");
  lim->add_option("--T", T, "switch-off time");
  lim->add_option("--digits", digits, "decimal places printed")->check(CLI::Range(0, 17));
  lim->callback([&] {
    const double v = ddm::asymptotic_tada_limit(ddm::SwitchModel(mu, b, T));
    std::printf("%.*f\n", digits, v);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return code;
}
