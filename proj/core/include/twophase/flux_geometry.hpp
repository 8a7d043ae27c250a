#pragma once

#include "twophase/constitutive.hpp"

#include <optional>

namespace twophase {

struct BaseState {
  double S_B = 0.1;
  double p_B = 0.0;
};

// Base state on the imbibition curve, the Scenario A convention.
BaseState imbibition_base(const Model& model, double S_B);
BaseState drainage_base(const Model& model, double S_B);

struct GeometryTolerances {
  double root = 1e-10;
  double quad = 1e-11;
  double star = 1e-12;
};

struct StarPair {
  double S_star;
  double S_upper_star;
};

struct PhiValue {
  double value;
  bool divergent;
};

// Chord and tangent constructions on the single flux curve of Scenario A.
class FluxGeometry {
 public:
  FluxGeometry(const Model& model, double S_B, GeometryTolerances tol = {});

  const Model& model() const { return model_; }
  double S_B() const { return S_B_; }
  double p_B() const { return p_B_; }
  double F_B() const { return F_B_; }
  const GeometryTolerances& tolerances() const { return tol_; }

  double F(double S) const;
  double dF(double S) const;
  double h(double S) const;

  double rh_slope(double alpha) const;
  double chord(double S, double alpha) const;
  double G(double S, double alpha) const;
  double dG(double S, double alpha) const;

  double S_o() const { return S_o_; }
  double S_underline() const { return S_underline_; }
  double S_tilde() const { return S_tilde_; }
  double S_bar() const { return S_bar_; }

  double beta(double alpha) const;
  double beta_inverse(double S) const;
  std::optional<double> gamma(double alpha) const;
  StarPair star_pair() const;
  PhiValue Phi(double S, double S_T) const;

 private:
  Model model_;
  double S_B_;
  double p_B_;
  double F_B_;
  GeometryTolerances tol_;
  double S_o_;
  double S_underline_;
  double S_tilde_;
  double S_bar_;
  mutable std::optional<StarPair> star_;
};

double inflection(const Model& model, Branch b = Branch::imbibition, double tol = 1e-10);

struct TangentPoints {
  double S_bar_i;
  double S_bar_d;
};

// Tangent points on F_i (to the right) and F_d (to the left) seen from U_B.
TangentPoints tangent_saturations_B(const Model& model, BaseState base, double tol = 1e-10);

// Intersection with F_i of the line through U_B and (S_T, F_d(S_T)).
std::optional<double> plateau_saturation(const Model& model, BaseState base, double S_T,
                                         double tol = 1e-10);

// S with F_b'(S) = zeta on [lo, hi], where F_b' is monotone.
double rarefaction_inverse(const Model& model, Branch b, double zeta, double lo, double hi,
                           double tol = 1e-10);

}  // namespace twophase
