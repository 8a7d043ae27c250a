#pragma once

#include "twophase/constitutive.hpp"
#include "twophase/flux_geometry.hpp"
#include "twophase/pde_solver.hpp"
#include "twophase/tw_solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace twophase {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstitutiveSection {
  CapillaryModel capillary{};
  double M = 1.0;
  double N_g = 1.0;
  double q_i = 2.0;
  double q_d = 2.0;
  bool hysteretic_permeability = false;
  FluxPreset flux_preset = FluxPreset::brooks_corey;
};

struct GeometrySection {
  double S_B = 0.1;
  double S_T = 0.4;
  Branch base = Branch::imbibition;  // branch carrying p_B
};

struct TwSection {
  std::vector<double> taus{0.045, 0.25, 1.0, 2.0};
  double tau_min = 0.05;
  double tau_max = 2.0;
  int tau_count = 40;
  double rel_tol = 1e-6;
  double eps = 1e-8;
  double xi_max = 2e4;
};

struct RiemannSection {
  Scenario scenario = Scenario::A;
  double t = 100.0;
  double z_min = -10.0;
  double z_max = 500.0;
  int samples = 2001;
  bool enforce_tau_bound = true;
};

struct PdeSection {
  double z_in = -10.0;
  double z_out = 500.0;
  double dz = 0.05;
  SolverConfig solver{};
  std::vector<double> checkpoints;
};

struct CompareSection {
  double plateau_band = 5e-3;
  int plateau_min_cells = 20;
  double level = 0.0;     // > 0: also track the front crossing this saturation
  double t_first = 0.0;   // 0: three quarters of t_end
};

struct RunConfig {
  ConstitutiveSection constitutive;
  GeometrySection geometry;
  TwSection tw;
  RiemannSection riemann;
  PdeSection pde;
  CompareSection compare;

  Model model() const;
  BaseState base() const;
  PdeProblem pde_problem() const;
  SolverConfig solver_config() const;
  Grid grid() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const RunConfig& cfg);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace twophase
