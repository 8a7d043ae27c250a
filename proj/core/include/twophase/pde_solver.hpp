#pragma once

#include "twophase/constitutive.hpp"
#include "twophase/tw_solver.hpp"

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace twophase {

class Grid {
 public:
  Grid(double z_in, double z_out, int N);
  static Grid with_spacing(double z_in, double z_out, double dz);

  double z_in() const { return z_in_; }
  double z_out() const { return z_out_; }
  int size() const { return static_cast<int>(centers_.size()); }
  double dz() const { return dz_; }
  std::span<const double> centers() const { return centers_; }

 private:
  double z_in_;
  double z_out_;
  double dz_;
  std::vector<double> centers_;
};

struct GridState {
  std::vector<double> S;
  std::vector<double> p;
  double t = 0.0;
};

enum class PressureScheme {
  newton,   // L = 1/tau off the scanning region, 0 inside, plus the dF/dp coupling
  lscheme,  // constant L
};
// automatic: central for an S-only flux, upwind when F depends on p.
enum class Advection { automatic, central, upwind };

PressureScheme parse_pressure_scheme(std::string_view s);
Advection parse_advection(std::string_view s);
std::string_view to_string(PressureScheme s);
std::string_view to_string(Advection a);

struct SolverConfig {
  double dt = 0.0;  // 0: min(0.5 dz / max F', tau / 2)
  double L = 0.0;   // 0: 1/tau
  double tol = 1e-8;
  int max_iter = 500;
  int max_halvings = 10;
  double smoothing_l = 1.0;
  double t_end = 1.0;
  Scenario bc_mode = Scenario::A;
  PressureScheme scheme = PressureScheme::newton;
  Advection advection = Advection::automatic;
};

struct PdeProblem {
  Model model;
  double S_B = 0.1;
  double S_T = 0.4;
};

std::vector<double> initial_condition(const Grid& grid, double S_B, double S_T, double l);

struct StepStats {
  int iterations = 0;
  int halvings = 0;
  double dt = 0.0;
  double mass_residual = 0.0;
};

struct RunSummary {
  long steps = 0;
  long total_iterations = 0;
  int max_iterations = 0;
  long rejected = 0;
  double max_mass_residual = 0.0;
  double wall_seconds = 0.0;
};

struct RunResult {
  std::vector<GridState> checkpoints;
  GridState final_state;
  RunSummary summary;
};

class PdeSolver {
 public:
  PdeSolver(PdeProblem pb, Grid grid, SolverConfig cfg);

  const Grid& grid() const { return grid_; }
  const SolverConfig& config() const { return cfg_; }
  double dt() const { return dt_; }
  double L() const { return L_; }
  double p_boundary() const { return p_out_; }
  Advection advection() const { return advection_; }

  GridState initial_state() const;

  // Converged pressure for fixed S; `p` is the starting iterate and holds the result.
  int solve_pressure(std::span<const double> S, std::vector<double>& p) const;
  StepStats step(GridState& st, double dt) const;

  using Observer = std::function<void(const GridState&, const StepStats&)>;
  RunResult run(std::span<const double> checkpoint_times, const Observer& obs = {}) const;
  RunResult run_from(GridState st, std::span<const double> checkpoint_times,
                     const Observer& obs = {}) const;

  // d/dt of the wetting volume computed from the boundary fluxes.
  double boundary_flux_difference(std::span<const double> S, std::span<const double> p) const;

 private:
  PdeProblem pb_;
  Grid grid_;
  SolverConfig cfg_;
  double tau_;
  double dt_;
  double L_;
  double p_out_;
  Advection advection_;
};

double max_flux_speed(const Model& model, int samples = 2000);

}  // namespace twophase
