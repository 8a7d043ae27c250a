#include "twophase/flux_geometry.hpp"

#include "twophase/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace twophase {

namespace {

constexpr double kEdge = 1e-8;

}  // namespace

BaseState imbibition_base(const Model& model, double S_B) {
  return {S_B, model.pc(Branch::imbibition, S_B)};
}

BaseState drainage_base(const Model& model, double S_B) {
  return {S_B, model.pc(Branch::drainage, S_B)};
}

double inflection(const Model& model, Branch b, double tol) {
  auto d2 = [&](double S) { return model.d2F(b, S); };
  auto br = first_sign_change(d2, 1e-4, 1.0 - 1e-4, 4000);
  if (!br) throw NumericalError("F'' has no sign change on (0,1): flux is not S-shaped");
  return bisect(d2, *br, tol);
}

FluxGeometry::FluxGeometry(const Model& model, double S_B, GeometryTolerances tol)
    : model_(model), S_B_(S_B), tol_(tol) {
  if (!(S_B > 0.0 && S_B < 1.0)) throw std::invalid_argument("S_B outside (0,1)");
  p_B_ = model_.pc(Branch::imbibition, S_B);
  F_B_ = F(S_B);
  S_o_ = inflection(model_, Branch::imbibition, tol_.root);
  if (S_B >= S_o_) throw std::invalid_argument("S_B must lie below the inflection saturation");

  S_underline_ = find_first_root(
      [this](double S) { return dF(S) * (1.0 - S) - (1.0 - F(S)); }, 1e-6, S_o_, "S_underline",
      tol_.root);
  if (S_B >= S_underline_) {
    throw std::invalid_argument("S_B must lie below the saturation whose tangent passes through (1, F(1))");
  }

  const double slope1 = (1.0 - F_B_) / (1.0 - S_B_);
  S_tilde_ = find_first_root(
      [&](double S) { return F(S) - (F_B_ + slope1 * (S - S_B_)); }, S_B_ + 1e-7, 1.0 - 1e-9,
      "S_tilde", tol_.root, 4000);

  S_bar_ = find_first_root(
      [this](double S) { return dF(S) * (S - S_B_) - (F(S) - F_B_); }, S_B_ + 1e-7, 1.0 - 1e-9,
      "S_bar", tol_.root, 4000);
}

double FluxGeometry::F(double S) const { return model_.flux(Branch::imbibition, S).F; }
double FluxGeometry::dF(double S) const { return model_.dflux(Branch::imbibition, S).F; }
double FluxGeometry::h(double S) const { return model_.flux(Branch::imbibition, S).h; }

double FluxGeometry::rh_slope(double alpha) const {
  if (alpha == S_B_) return dF(S_B_);
  return (F(alpha) - F_B_) / (alpha - S_B_);
}

double FluxGeometry::chord(double S, double alpha) const {
  return F_B_ + rh_slope(alpha) * (S - S_B_);
}

double FluxGeometry::G(double S, double alpha) const {
  return (F(S) - chord(S, alpha)) / h(S);
}

double FluxGeometry::dG(double S, double alpha) const {
  const auto v = model_.flux(Branch::imbibition, S);
  const auto d = model_.dflux(Branch::imbibition, S);
  const double c = rh_slope(alpha);
  return (d.F - c) / v.h - (v.F - chord(S, alpha)) * d.h / (v.h * v.h);
}

double FluxGeometry::beta(double alpha) const {
  if (alpha < S_tilde_ - tol_.root || alpha > S_bar_ + tol_.root) {
    throw std::domain_error("beta is defined on [S_tilde, S_bar]");
  }
  if (alpha >= S_bar_) return S_bar_;
  if (alpha <= S_tilde_) return 1.0;
  auto fn = [&](double S) { return F(S) - chord(S, alpha); };
  if (fn(1.0) >= 0.0) return 1.0;
  return bisect(fn, {S_bar_, 1.0}, tol_.root);
}

double FluxGeometry::beta_inverse(double S) const {
  if (S < S_bar_ - tol_.root || S > 1.0) throw std::domain_error("beta_inverse needs S in [S_bar,1]");
  if (S <= S_bar_) return S_bar_;
  if (S >= 1.0) return S_tilde_;
  return bisect([&](double a) { return beta(a) - S; }, {S_tilde_, S_bar_}, tol_.root);
}

std::optional<double> FluxGeometry::gamma(double alpha) const {
  if (alpha < S_B_) throw std::domain_error("gamma needs alpha >= S_B");
  if (alpha == S_B_) return S_B_;
  auto g = [&](double S) { return G(S, alpha); };
  const double upper = alpha >= S_tilde_ && alpha <= S_bar_ ? std::min(beta(alpha), 1.0 - kEdge)
                                                           : 1.0 - kEdge;
  if (upper <= alpha) return std::nullopt;

  double psi = integrate(g, S_B_, alpha, tol_.quad);
  // G > 0 on (alpha, upper), so the primitive is increasing there
  if (psi + integrate(g, alpha, upper, tol_.quad) < 0.0) return std::nullopt;
  constexpr int panels = 200;
  double x0 = alpha;
  for (int k = 1; k <= panels; ++k) {
    const double x1 = alpha + (upper - alpha) * k / panels;
    const double inc = integrate(g, x0, x1, tol_.quad);
    if (psi + inc >= 0.0) {
      const double base = psi;
      auto prim = [&](double x) { return base + integrate(g, x0, x, tol_.quad); };
      return bisect(prim, {x0, x1}, tol_.root);
    }
    psi += inc;
    x0 = x1;
  }
  return std::nullopt;
}

StarPair FluxGeometry::star_pair() const {
  if (star_) return *star_;
  // gamma(a) = beta(a) exactly when the primitive of G(., a) vanishes at beta(a); that integral
  // is smooth in a, unlike gamma itself which has a square-root branch there.
  auto side = [&](double a) { return Phi(beta(a), a).value; };
  if (side(S_tilde_) > 0.0 || side(S_bar_) < 0.0) {
    throw NumericalError("beta and gamma do not intersect on [S_tilde, S_bar]");
  }
  const double s = bisect(side, {S_tilde_, S_bar_}, tol_.star);
  star_ = StarPair{s, beta(s)};
  return *star_;
}

PhiValue FluxGeometry::Phi(double S, double S_T) const {
  if (S < S_B_) throw std::domain_error("Phi needs S >= S_B");
  auto g = [&](double r) { return G(r, S_T); };
  const double top = std::min(S, 1.0 - kEdge);
  const double value = -integrate(g, S_B_, top, tol_.quad);
  bool divergent = false;
  if (S >= 1.0 - kEdge) {
    const double tail = integrate(g, 1.0 - 1e-4, 1.0 - kEdge, tol_.quad);
    divergent = std::abs(tail) > 1e3;
  }
  return {value, divergent};
}

TangentPoints tangent_saturations_B(const Model& model, BaseState base, double tol) {
  const double S_B = base.S_B;
  const double F_B = model.flux(S_B, base.p_B).F;

  // tangency residual divided by (S - S_B)^2, which stays away from zero near S_B when U_B
  // lies on the branch itself
  auto residual = [&](Branch b) {
    return [&model, b, S_B, F_B](double S) {
      const double d = S - S_B;
      return (model.dflux(b, S).F * d - (model.flux(b, S).F - F_B)) / (d * d);
    };
  };

  TangentPoints out{1.0, 0.0};
  const double pi = model.pc(Branch::imbibition, S_B);
  const double pd = model.pc(Branch::drainage, S_B);

  if (base.p_B == pi && model.d2F(Branch::imbibition, S_B) <= 0.0) {
    out.S_bar_i = S_B;
  } else {
    auto r = residual(Branch::imbibition);
    if (auto br = first_sign_change(r, S_B + 1e-6, 1.0, 4000)) out.S_bar_i = bisect(r, *br, tol);
  }

  if (base.p_B == pd && model.d2F(Branch::drainage, S_B) >= 0.0) {
    out.S_bar_d = S_B;
  } else {
    auto r = residual(Branch::drainage);
    if (auto br = first_sign_change(r, S_B - 1e-6, 1e-9, 4000)) out.S_bar_d = bisect(r, *br, tol);
  }
  return out;
}

std::optional<double> plateau_saturation(const Model& model, BaseState base, double S_T,
                                         double tol) {
  const double F_B = model.flux(base.S_B, base.p_B).F;
  const double F_T = model.flux(Branch::drainage, S_T).F;
  const double slope = (F_T - F_B) / (S_T - base.S_B);
  const double S_bar_i = tangent_saturations_B(model, base, tol).S_bar_i;
  if (S_bar_i <= S_T) return std::nullopt;
  auto fn = [&](double S) { return model.flux(Branch::imbibition, S).F - (F_T + slope * (S - S_T)); };
  auto br = first_sign_change(fn, S_T + 1e-9, 1.0, 4000);
  if (!br) return std::nullopt;
  return bisect(fn, *br, tol);
}

double rarefaction_inverse(const Model& model, Branch b, double zeta, double lo, double hi,
                           double tol) {
  auto fn = [&](double S) { return model.dflux(b, S).F - zeta; };
  const double flo = fn(lo), fhi = fn(hi);
  const double slack = 1e-12 * (1.0 + std::abs(zeta));
  if (std::abs(flo) <= slack) return lo;
  if (std::abs(fhi) <= slack) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw std::domain_error("speed outside the rarefaction fan");
  return bisect(fn, {lo, hi}, tol);
}

}  // namespace twophase
