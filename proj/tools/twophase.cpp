#include "twophase/config.hpp"
#include "twophase/entropy.hpp"
#include "twophase/flux_geometry.hpp"
#include "twophase/numerics.hpp"
#include "twophase/pde_solver.hpp"
#include "twophase/report.hpp"
#include "twophase/tw_solver.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace twophase;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

// Shortest round-trip form, for file names.
std::string label(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Output {
  std::string prefix = "twophase";

  fs::path path(const std::string& suffix) const {
    fs::path p(prefix + "_" + suffix);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
  }

  std::ofstream open(const std::string& suffix) const {
    const auto p = path(suffix);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    std::cerr << "wrote " << p.string() << "\n";
    return out;
  }
};

TravelingWaveSolver make_tw(const RunConfig& cfg) {
  TwOptions opt;
  opt.tau_rel_tol = cfg.tw.rel_tol;
  opt.orbit.eps = cfg.tw.eps;
  opt.orbit.xi_max = cfg.tw.xi_max;
  return TravelingWaveSolver(FluxGeometry(cfg.model(), cfg.geometry.S_B), opt);
}

void write_orbit(std::ostream& out, const Orbit& o) {
  CsvWriter csv(out, {"xi", "S", "p"});
  for (const auto& s : o.samples) csv.row({s.xi, s.S, s.p});
}

void cmd_geometry(const RunConfig& cfg, const Output& out) {
  const Model m = cfg.model();
  FluxGeometry geo(m, cfg.geometry.S_B);
  const auto star = geo.star_pair();
  {
    auto f = out.open("geometry.csv");
    f << "quantity,value\n";
    auto put = [&](const char* name, double v) { f << name << "," << format_double(v) << "\n"; };
    put("S_B", geo.S_B());
    put("p_B", geo.p_B());
    put("F_B", geo.F_B());
    put("S_o", geo.S_o());
    put("S_underline", geo.S_underline());
    put("S_tilde", geo.S_tilde());
    put("S_bar", geo.S_bar());
    put("S_star", star.S_star);
    put("S_upper_star", star.S_upper_star);
  }
  {
    auto f = out.open("flux.csv");
    CsvWriter csv(f, {"S", "F_i", "F_d", "dF_i", "h_i", "pc_i", "pc_d"});
    for (int k = 1; k < 1000; ++k) {
      const double S = k / 1000.0;
      csv.row({S, m.flux(Branch::imbibition, S).F, m.flux(Branch::drainage, S).F,
               m.dflux(Branch::imbibition, S).F, m.flux(Branch::imbibition, S).h,
               m.pc(Branch::imbibition, S), m.pc(Branch::drainage, S)});
    }
  }
  {
    auto f = out.open("beta_gamma.csv");
    CsvWriter csv(f, {"alpha", "beta", "gamma"});
    const int n = 200;
    for (int k = 0; k <= n; ++k) {
      const double a = geo.S_tilde() + (geo.S_bar() - geo.S_tilde()) * k / n;
      const auto g = geo.gamma(a);
      csv.row({a, geo.beta(a), g ? *g : std::nan("")});
    }
  }
}

void cmd_tw(const RunConfig& cfg, const Output& out) {
  const double S_T = cfg.geometry.S_T;
  auto summary = out.open("tw_summary.csv");
  summary << "tau,outcome,S_m,sign_changes,c\n";
  auto report = [&](double tau, const Orbit& o) {
    summary << format_double(tau) << "," << to_string(o.outcome) << ","
            << (o.S_m ? format_double(*o.S_m) : "") << "," << o.sign_changes << ","
            << format_double(o.c) << "\n";
    auto f = out.open("orbit_tau" + label(tau) + ".csv");
    write_orbit(f, o);
  };
  if (cfg.riemann.scenario == Scenario::A) {
    const auto tw = make_tw(cfg);
    std::vector<std::future<Orbit>> jobs;
    for (double tau : cfg.tw.taus) {
      jobs.push_back(std::async(std::launch::async, [&tw, tau, S_T] { return tw.integrate_orbit(tau, S_T); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) report(cfg.tw.taus[i], jobs[i].get());
  } else {
    OrbitOptions opt;
    opt.eps = cfg.tw.eps;
    opt.xi_max = cfg.tw.xi_max;
    for (double tau : cfg.tw.taus) {
      const ScenarioBProblem pb{cfg.model().with_tau(tau), cfg.base(), S_T, tau};
      report(tau, scenario_b_orbit(pb, opt));
    }
  }
}

void cmd_critical_tau(const RunConfig& cfg, const Output& out) {
  const auto tw = make_tw(cfg);
  const double S_T = cfg.geometry.S_T;
  const auto ct = tw.critical_taus(S_T);
  auto f = out.open("critical_tau.csv");
  f << "quantity,value\n";
  auto put = [&](const char* name, double v) { f << name << "," << format_double(v) << "\n"; };
  put("S_T", S_T);
  put("tau_i", ct.tau_i);
  put("tau_d", ct.tau_d);
  put("tau_bar_m", tw.tau_bar_m(S_T));
  put("tau_m", tw.tau_m(S_T));
  if (S_T > tw.geometry().star_pair().S_star && S_T <= tw.geometry().S_bar()) {
    put("tau_c", tw.tau_c(S_T));
  }
  put("tau_bar", tw.tau_bar());
}

void cmd_bifurcation(const RunConfig& cfg, const Output& out) {
  const auto tw = make_tw(cfg);
  std::vector<double> taus;
  const int n = cfg.tw.tau_count;
  const double a = std::log(cfg.tw.tau_min), b = std::log(cfg.tw.tau_max);
  for (int k = 0; k < n; ++k) taus.push_back(std::exp(n == 1 ? a : a + (b - a) * k / (n - 1)));
  const auto curves = tw.bifurcation_curves(taus);
  auto f = out.open("bifurcation.csv");
  CsvWriter csv(f, {"tau", "S_check", "S_hat"});
  for (std::size_t k = 0; k < curves.tau.size(); ++k) {
    csv.row({curves.tau[k], curves.S_check[k], curves.S_hat[k]});
  }
  auto g = out.open("bifurcation_summary.csv");
  g << "quantity,value\ntau_bar," << format_double(curves.tau_bar) << "\n";
}

PiecewiseSolution riemann_solution(const RunConfig& cfg) {
  const Model m = cfg.model();
  RiemannProblem pb{m, cfg.geometry.S_B, cfg.geometry.S_T, cfg.base().p_B, m.tau(),
                    cfg.riemann.scenario};
  if (pb.scenario == Scenario::A) return solve_A(pb);
  return solve_B(pb, cfg.riemann.enforce_tau_bound);
}

void cmd_riemann(const RunConfig& cfg, const Output& out) {
  const auto sol = riemann_solution(cfg);
  {
    auto f = out.open("riemann_waves.csv");
    f << "kind,left_S,right_S,speed_lo,speed_hi,classical\n";
    for (const auto& s : sol.segments) {
      f << to_string(s.kind) << "," << format_double(s.left_S) << "," << format_double(s.right_S)
        << "," << format_double(s.speed_lo) << "," << format_double(s.speed_hi) << ","
        << (s.kind == SegmentKind::shock ? (s.classical ? "true" : "false") : "") << "\n";
    }
  }
  auto f = out.open("riemann_profile.csv");
  CsvWriter csv(f, {"z", "S"});
  const auto& r = cfg.riemann;
  for (int k = 0; k < r.samples; ++k) {
    const double z = r.z_min + (r.z_max - r.z_min) * k / (r.samples - 1);
    csv.row({z, evaluate(sol, z, r.t)});
  }
}

RunResult run_pde(const RunConfig& cfg, std::vector<double> checkpoints) {
  PdeSolver solver(cfg.pde_problem(), cfg.grid(), cfg.solver_config());
  return solver.run(checkpoints);
}

void write_run(const RunConfig& cfg, const RunResult& res, const Output& out,
               const std::string& tag) {
  const Grid grid = cfg.grid();
  for (const auto& st : res.checkpoints) {
    const auto p = out.path(tag + "t" + label(st.t) + ".csv");
    write_profile(p, grid, st);
    std::cerr << "wrote " << p.string() << "\n";
  }
  auto f = out.open(tag + "summary.csv");
  const auto& s = res.summary;
  f << "steps,total_iterations,max_iterations,mean_iterations,rejected,max_mass_residual,wall_seconds\n"
    << s.steps << "," << s.total_iterations << "," << s.max_iterations << ","
    << format_double(s.steps ? static_cast<double>(s.total_iterations) / s.steps : 0.0) << ","
    << s.rejected << "," << format_double(s.max_mass_residual) << ","
    << format_double(s.wall_seconds) << "\n";
}

void cmd_pde(const RunConfig& cfg, const Output& out, const std::string& tag = "pde_") {
  auto marks = cfg.pde.checkpoints;
  marks.push_back(cfg.pde.solver.t_end);
  write_run(cfg, run_pde(cfg, marks), out, tag);
}

Prediction theory(const RunConfig& cfg) {
  if (cfg.riemann.scenario == Scenario::B) {
    const Model m = cfg.model();
    const ScenarioBProblem pb{m, cfg.base(), cfg.geometry.S_T, m.tau()};
    if (scenario_b_case(pb) == ScenarioBCase::Plateau) {
      Prediction p;
      p.source = "plateau line through U_B and (S_T, F_d(S_T))";
      const double S_P = *plateau_saturation(m, pb.base, pb.S_T);
      const double F_B = m.flux(pb.base.S_B, pb.base.p_B).F;
      const double c = (m.flux(Branch::imbibition, S_P).F - F_B) / (S_P - pb.base.S_B);
      p.plateau = S_P;
      p.fronts = {{"drainage", pb.S_T, S_P, c, Side::leftmost},
                  {"infiltration", S_P, pb.base.S_B, c, Side::rightmost}};
      return p;
    }
  }
  return predict(riemann_solution(cfg), "entropy solution");
}

void cmd_compare(const RunConfig& cfg, const Output& out) {
  const double t_end = cfg.pde.solver.t_end;
  const double t1 = cfg.compare.t_first > 0.0 ? cfg.compare.t_first : 0.75 * t_end;
  const auto pred = theory(cfg);
  const auto res = run_pde(cfg, {t1, t_end});
  if (res.checkpoints.size() != 2) throw NumericalError("checkpoints were not reached");
  const Grid grid = cfg.grid();
  auto r = compare(grid.centers(), res.checkpoints[0], res.checkpoints[1], pred, cfg.geometry.S_B,
                   cfg.geometry.S_T, cfg.compare.plateau_band, cfg.compare.plateau_min_cells);
  if (cfg.compare.level > 0.0) {
    const double c = estimate_front_speed(grid.centers(), res.checkpoints[0].S, t1,
                                          res.checkpoints[1].S, t_end, cfg.compare.level);
    r.fronts.push_back({"level", cfg.compare.level, c, std::nan("")});
    r.deviations.push_back({"level_speed", c, std::nan(""), "configured level"});
  }
  auto f = out.open("compare.csv");
  write_report(f, r);
  write_run(cfg, res, out, "compare_");
}

RunConfig section_5_1() {
  RunConfig c;
  c.geometry = {0.1, 0.4, Branch::imbibition};
  c.pde.z_in = -10.0;
  c.pde.z_out = 500.0;
  c.pde.solver.t_end = 300.0;
  return c;
}

RunConfig section_5_2(double S_B, double S_T, double tau) {
  RunConfig c;
  c.constitutive.flux_preset = FluxPreset::hysteretic_bc;
  c.constitutive.N_g = 0.0;
  c.constitutive.capillary.tau = tau;
  c.geometry = {S_B, S_T, Branch::drainage};
  c.riemann.scenario = Scenario::B;
  c.riemann.z_max = 190.0;
  c.pde.z_in = -10.0;
  c.pde.z_out = 190.0;
  return c;
}

void cmd_reproduce(const std::string& fig, const Output& base) {
  auto sub = [&](const std::string& name) { return Output{base.prefix + "_" + name}; };
  if (fig == "fig-orbits") {
    auto c = section_5_1();
    cmd_critical_tau(c, sub(fig));
    cmd_tw(c, sub(fig));
  } else if (fig == "fig-bifurcation") {
    auto c = section_5_1();
    c.tw.tau_min = 0.02;
    c.tw.tau_max = 2.0;
    c.tw.tau_count = 40;
    cmd_geometry(c, sub(fig));
    cmd_bifurcation(c, sub(fig));
  } else if (fig == "fig-entropy") {
    std::vector<std::future<void>> jobs;
    for (double S_T : {0.35, 0.55, 0.8}) {
      auto c = section_5_1();
      c.constitutive.capillary.tau = 1.0;
      c.geometry.S_T = S_T;
      const auto o = sub(fig + "_ST" + label(S_T));
      cmd_riemann(c, o);
      jobs.push_back(std::async(std::launch::async, [c, o] { cmd_compare(c, o); }));
    }
    for (auto& j : jobs) j.get();
  } else if (fig == "fig-scenarioB-rw") {
    std::vector<std::future<void>> jobs;
    for (auto [S_B, S_T] : {std::pair{0.3, 0.95}, std::pair{0.95, 0.3}}) {
      auto c = section_5_2(S_B, S_T, 0.02);
      c.pde.solver.t_end = 80.0;
      c.riemann.t = 80.0;
      const auto o = sub(fig + "_SB" + label(S_B));
      cmd_riemann(c, o);
      jobs.push_back(std::async(std::launch::async, [c, o] { cmd_pde(c, o); }));
    }
    for (auto& j : jobs) j.get();
  } else if (fig == "fig-plateau") {
    auto c = section_5_2(0.3, 0.5, 0.5);
    c.pde.solver.t_end = 120.0;
    c.pde.checkpoints = {10.0, 40.0, 80.0};
    cmd_compare(c, sub(fig));
  } else {
    throw ConfigError("unknown figure '" + fig + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase flow with hysteresis and dynamic capillarity"};
  app.require_subcommand(1);
  std::string config_path;
  Output out;
  std::string checkpoints;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out-prefix,--out", out.prefix, "Prefix for written CSV files");

  auto* geometry = app.add_subcommand("geometry", "Characteristic saturations and flux curves");
  auto* tw = app.add_subcommand("tw", "Traveling-wave orbits for the configured taus");
  auto* critical = app.add_subcommand("critical-tau", "Critical relaxation parameters for S_T");
  auto* bif = app.add_subcommand("bifurcation", "Bifurcation curves over a tau sweep");
  auto* riemann = app.add_subcommand("riemann", "Entropy solution of the Riemann problem");
  auto* pde = app.add_subcommand("pde", "Finite-volume run of the regularised system");
  pde->add_option("--checkpoints", checkpoints, "Comma separated output times");
  auto* cmp = app.add_subcommand("compare", "PDE run against traveling-wave and entropy theory");
  auto* repro = app.add_subcommand("reproduce", "Canned runs for the reference figures");
  std::string figure;
  repro->add_option("figure", figure, "fig-orbits | fig-bifurcation | fig-entropy | "
                                      "fig-scenarioB-rw | fig-plateau")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!checkpoints.empty()) cfg.pde.checkpoints = parse_double_list(checkpoints);
    if (geometry->parsed()) cmd_geometry(cfg, out);
    else if (tw->parsed()) cmd_tw(cfg, out);
    else if (critical->parsed()) cmd_critical_tau(cfg, out);
    else if (bif->parsed()) cmd_bifurcation(cfg, out);
    else if (riemann->parsed()) cmd_riemann(cfg, out);
    else if (pde->parsed()) cmd_pde(cfg, out);
    else if (cmp->parsed()) cmd_compare(cfg, out);
    else if (repro->parsed()) cmd_reproduce(figure, out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
