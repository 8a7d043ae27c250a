#pragma once

#include "twophase/constitutive.hpp"
#include "twophase/tw_solver.hpp"

#include <string_view>
#include <vector>

namespace twophase {

enum class SegmentKind { constant, shock, rarefaction };
std::string_view to_string(SegmentKind k);

struct Segment {
  SegmentKind kind = SegmentKind::constant;
  double left_S = 0.0;
  double right_S = 0.0;
  double speed_lo = 0.0;
  double speed_hi = 0.0;
  // Shocks: flux values on each side and the Oleinik label.
  double left_F = 0.0;
  double right_F = 0.0;
  bool classical = true;
  Branch branch = Branch::imbibition;
};

// Segments ordered left to right in z/t; speeds increase along the sequence.
struct PiecewiseSolution {
  Model model;
  double S_left = 0.0;
  double S_right = 0.0;
  std::vector<Segment> segments;

  std::size_t shock_count() const;
  std::size_t nonclassical_count() const;
};

struct RiemannProblem {
  Model model;
  double S_B = 0.1;
  double S_T = 0.4;
  double p_B = 0.0;
  double tau = 1.0;
  Scenario scenario = Scenario::A;
};

PiecewiseSolution solve_A(const RiemannProblem& pb);
PiecewiseSolution solve_A(const RiemannProblem& pb, const TravelingWaveSolver& tw);
PiecewiseSolution solve_B(const RiemannProblem& pb, bool enforce_tau_bound = true);

double evaluate(const PiecewiseSolution& sol, double z, double t);

// Chord test over the open interval between the shock states on the given branch.
bool oleinik_admissible(const Model& model, Branch b, double uL, double FL, double uR, double FR,
                        double speed, int samples = 2000);

}  // namespace twophase
