#pragma once

#include "twophase/constitutive.hpp"
#include "twophase/flux_geometry.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

namespace twophase {

enum class Scenario { A, B };

enum class OrbitOutcome {
  MonotoneToImbibition,
  FiniteTurnsToImbibition,
  FiniteTurnsToDrainage,
  InfiniteSpiral,
  ReachesBeta,
  FullSaturationBlowup,
  DrainageConnection,
  Frozen,
  Inconclusive,
};

std::string_view to_string(OrbitOutcome o);

struct OrbitSample {
  double xi;
  double S;
  double p;
};

struct Orbit {
  std::vector<OrbitSample> samples;
  OrbitOutcome outcome = OrbitOutcome::Inconclusive;
  std::optional<double> S_m;
  int sign_changes = 0;
  double c = 0.0;
  std::optional<double> p_T;
};

double rh_speed(const Model& model, double S_B, double p_B, double S_T, double p_T);

struct OrbitOptions {
  double eps = 1e-8;
  double xi_max = 2e4;
  double max_dxi = 1.0;
  long max_steps = 2'000'000;
  int spiral_sign_changes = 6;
  double spiral_ratio = 0.95;
  double converge_S = 1e-7;
  double converge_p = 1e-4;
  double S_cutoff = 1.0 - 1e-6;
};

// Orbit of S' = R(S,p)/(c tau), p' = (F(S,p) - F0 - c (S - S0)) / h(S,p) leaving (S0, p0)
// towards the segment over S_T. When p0 is not on the p_c branch facing S_T the orbit first
// runs through the scanning region at fixed S0.
Orbit connect(const Model& model, double S0, double p0, double F0, double S_T, double c, double tau,
              const OrbitOptions& opt = {});

struct WCurve {
  std::vector<double> S;
  std::vector<double> w;
  double S_m = 0.0;
  bool blowup = false;
  bool stopped = false;  // reached the requested stop saturation before contact
};

struct CriticalTaus {
  double tau_i;
  double tau_d;
};

// (S, v) shooting for w on one branch: S' = v, v' = v p_c'(S) - c tau G(S), v = p_c(S) - w.
struct BranchSystem {
  const Model* model;
  Branch branch;
  double S0;
  double F0;
  double c;
  bool singular_start;  // (S0, p_c(S0)) is an equilibrium of the branch system

  double G(double S) const;
  double dG(double S) const;
};

WCurve shoot_w(const BranchSystem& sys, double tau, double S_T, double S_stop, bool record = true,
               double t_max = 1e6);

struct BifurcationCurves {
  std::vector<double> tau;
  std::vector<double> S_check;
  std::vector<double> S_hat;
  double tau_bar = 0.0;
};

enum class SolutionSet { A, B, C, OutOfScope };
std::string_view to_string(SolutionSet s);

struct TwOptions {
  double tau_rel_tol = 1e-6;
  double S_tol = 1e-10;
  double cross_tol = 1e-9;
  bool memoize = true;
  OrbitOptions orbit{};
};

class TravelingWaveSolver {
 public:
  explicit TravelingWaveSolver(FluxGeometry geo, TwOptions opt = {});

  const FluxGeometry& geometry() const { return geo_; }
  const Model& model() const { return geo_.model(); }

  WCurve integrate_w(double tau, double S_T, double S_stop = 1.0 - 1e-6, bool record = true) const;
  double S_m(double tau, double S_T) const;
  bool exceeds_target(double tau, double S_T) const;
  bool blows_past_beta(double tau, double S_T) const;

  CriticalTaus critical_taus(double S_T) const;
  double tau_bar_m(double S_T) const;
  double tau_m(double S_T) const;
  double tau_c(double S_T) const;
  double tau_bar() const;
  double S_check(double tau) const;
  double S_hat(double tau) const;
  BifurcationCurves bifurcation_curves(std::span<const double> taus, bool parallel = true) const;
  SolutionSet classify_pair(double S_T, double tau) const;

  Orbit integrate_orbit(double tau, double S_T) const;
  Orbit drainage_orbit(double tau, double S_T) const;

 private:
  BranchSystem branch_system(double S_T) const;
  bool cached_blow(double tau, double S_T, double S_stop, bool target_only) const;

  FluxGeometry geo_;
  TwOptions opt_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::tuple<long long, long long, long long, bool>, bool> cache_;
  mutable std::once_flag tau_bar_once_;
  mutable double tau_bar_ = 0.0;
};

// Scenario B
struct ScenarioBProblem {
  Model model;
  BaseState base;
  double S_T;
  double tau;
};

enum class ScenarioBCase { Imbibition, Drainage, Frozen, Plateau, Rarefaction };
std::string_view to_string(ScenarioBCase c);

ScenarioBCase scenario_b_case(const ScenarioBProblem& pb);
double frozen_pressure(const Model& model, BaseState base, double S_T);
double tau_star(const Model& model, BaseState base, double S_T, Branch b, double rel_tol = 1e-6);
// Smallest tau_star over saturations between S_B and the tangent point on `side`.
double scenario_b_tau_bound(const Model& model, BaseState base, Branch side, int samples = 6);
Orbit scenario_b_orbit(const ScenarioBProblem& pb, const OrbitOptions& opt = {});

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace twophase
