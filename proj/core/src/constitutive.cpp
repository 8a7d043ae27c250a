#include "twophase/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace twophase {

namespace {

void check_saturation(double S) {
  if (!(S > 0.0 && S <= 1.0)) {
    throw std::domain_error("saturation outside (0,1]: " + std::to_string(S));
  }
}

}  // namespace

std::string_view to_string(Branch b) {
  return b == Branch::imbibition ? "imbibition" : "drainage";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::imbibition: return "imbibition";
    case Region::scanning: return "scanning";
    case Region::drainage: return "drainage";
  }
  return "?";
}

double VanGenuchten::pc(double S) const {
  check_saturation(S);
  if (S == 1.0) return 0.0;
  return Lambda * std::pow(std::pow(S, -1.0 / m) - 1.0, 1.0 - m);
}

double VanGenuchten::dpc(double S) const {
  check_saturation(S);
  if (S == 1.0) return -std::numeric_limits<double>::infinity();
  const double X = std::pow(S, -1.0 / m) - 1.0;
  return -Lambda * (1.0 - m) / m * std::pow(X, -m) * std::pow(S, -1.0 / m - 1.0);
}

double PowerLawPermeability::krw(double S) const { return a * std::pow(S, q); }

double PowerLawPermeability::dkrw(double S) const {
  if (S == 0.0) return q == 1.0 ? a : 0.0;
  return a * q * std::pow(S, q - 1.0);
}

double PowerLawPermeability::krn(double S) const {
  const double base = 1.0 - std::pow(S, s);
  return base <= 0.0 ? 0.0 : b * std::pow(base, r);
}

double PowerLawPermeability::dkrn(double S) const {
  const double base = 1.0 - std::pow(S, s);
  const double dbase = S == 0.0 ? (s == 1.0 ? -1.0 : 0.0) : -s * std::pow(S, s - 1.0);
  if (base <= 0.0) return r == 1.0 ? b * dbase : 0.0;
  return b * r * std::pow(base, r - 1.0) * dbase;
}

PowerLawPermeability brooks_corey(double q) { return {1.0, q, 1.0, 1.0, q}; }

FluxPreset parse_flux_preset(std::string_view name) {
  if (name == "brooks_corey") return FluxPreset::brooks_corey;
  if (name == "hysteretic_bc") return FluxPreset::hysteretic_bc;
  if (name == "hysteretic_quadratic") return FluxPreset::hysteretic_quadratic;
  throw std::invalid_argument("unknown flux preset '" + std::string(name) + "'");
}

std::string_view to_string(FluxPreset p) {
  switch (p) {
    case FluxPreset::brooks_corey: return "brooks_corey";
    case FluxPreset::hysteretic_bc: return "hysteretic_bc";
    case FluxPreset::hysteretic_quadratic: return "hysteretic_quadratic";
  }
  return "?";
}

// Both hysteretic presets are meant for M = 1: the factors 3 and 2 sit in k_rw.
PermeabilityModel preset_permeability(FluxPreset p, double q_i, double q_d) {
  switch (p) {
    case FluxPreset::brooks_corey:
      return {brooks_corey(q_i), brooks_corey(q_d)};
    case FluxPreset::hysteretic_bc:
      return {{1.0 / 3.0, 2.0, 1.0, 1.0, 2.0}, {0.5, 2.0, 1.0, 1.0, 2.0}};
    case FluxPreset::hysteretic_quadratic:
      return {{1.0 / 3.0, 2.0, 1.0, 2.0, 1.0}, {0.5, 2.0, 1.0, 2.0, 1.0}};
  }
  throw std::invalid_argument("flux preset");
}

Model::Model(CapillaryModel cap, PermeabilityModel perm, double M, double N_g)
    : cap_(cap), perm_(perm), M_(M), N_g_(N_g) {
  if (!(M > 0.0)) throw std::invalid_argument("viscosity ratio M must be positive");
  if (N_g < 0.0) throw std::invalid_argument("gravity number N_g must be nonnegative");
  if (cap.tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
  for (const auto* c : {&cap.imbibition, &cap.drainage}) {
    if (!(c->Lambda > 0.0) || !(c->m > 0.0 && c->m < 1.0)) {
      throw std::invalid_argument("van Genuchten parameters need Lambda > 0 and 0 < m < 1");
    }
  }
}

Model Model::with_tau(double tau) const {
  Model out = *this;
  out.cap_.tau = tau;
  return out;
}

const PowerLawPermeability& Model::perm(Branch b) const {
  return b == Branch::imbibition ? perm_.imbibition : perm_.drainage;
}

const VanGenuchten& Model::curve(Branch b) const {
  return b == Branch::imbibition ? cap_.imbibition : cap_.drainage;
}

double Model::pc(Branch b, double S) const { return curve(b).pc(S); }
double Model::dpc(Branch b, double S) const { return curve(b).dpc(S); }

Region Model::classify(double S, double p) const {
  check_saturation(S);
  if (!std::isfinite(p)) throw std::domain_error("pressure is not finite");
  if (p < cap_.imbibition.pc(S)) return Region::imbibition;
  if (p > cap_.drainage.pc(S)) return Region::drainage;
  return Region::scanning;
}

double Model::relaxation(double S, double p) const {
  const double pi = cap_.imbibition.pc(S);
  if (p < pi) return pi - p;
  const double pd = cap_.drainage.pc(S);
  if (p > pd) return pd - p;
  return 0.0;
}

double Model::krel(Phase ph, double S, double p) const {
  check_saturation(S);
  const auto& ki = perm_.imbibition;
  const auto& kd = perm_.drainage;
  const double vi = ph == Phase::wetting ? ki.krw(S) : ki.krn(S);
  const double vd = ph == Phase::wetting ? kd.krw(S) : kd.krn(S);
  const double pi = cap_.imbibition.pc(S);
  const double pd = cap_.drainage.pc(S);
  if (p <= pi || pd <= pi) return vi;
  if (p >= pd) return vd;
  return vi + (vd - vi) * (p - pi) / (pd - pi);
}

FluxValue Model::compose(double krw, double krn) const {
  const double den = krw + M_ * krn;
  const double f = den > 0.0 ? krw / den : 0.0;
  const double h = krn * f;
  return {f, h, f + N_g_ * h};
}

FluxValue Model::flux(double S, double p) const {
  if (S == 0.0) return {};
  if (!perm_.hysteretic()) return flux(Branch::imbibition, S);
  return compose(krel(Phase::wetting, S, p), krel(Phase::nonwetting, S, p));
}

FluxValue Model::flux(Branch b, double S) const {
  if (S == 0.0) return {};
  check_saturation(S);
  const auto& k = perm(b);
  return compose(k.krw(S), k.krn(S));
}

FluxValue Model::dflux(Branch b, double S) const {
  const auto& k = perm(b);
  const double w = k.krw(S), n = k.krn(S);
  const double dw = k.dkrw(S), dn = k.dkrn(S);
  const double den = w + M_ * n;
  if (den <= 0.0) return {};
  const double f = w / den;
  const double df = M_ * (dw * n - w * dn) / (den * den);
  const double dh = dn * f + n * df;
  return {df, dh, df + N_g_ * dh};
}

// Central difference of the analytic slope; step 1e-5 keeps the error near 1e-10.
double Model::d2F(Branch b, double S) const {
  const double h = 1e-5;
  const double lo = std::max(S - h, 1e-12);
  const double hi = std::min(S + h, 1.0);
  return (dflux(b, hi).F - dflux(b, lo).F) / (hi - lo);
}

double Model::dF_dp(double S, double p) const {
  if (!perm_.hysteretic() || S <= 0.0 || S >= 1.0) return 0.0;
  const double pi = cap_.imbibition.pc(S);
  const double pd = cap_.drainage.pc(S);
  if (p <= pi || p >= pd) return 0.0;
  const double theta = (p - pi) / (pd - pi);
  const auto& ki = perm_.imbibition;
  const auto& kd = perm_.drainage;
  const double w = ki.krw(S) + (kd.krw(S) - ki.krw(S)) * theta;
  const double n = ki.krn(S) + (kd.krn(S) - ki.krn(S)) * theta;
  const double dw = (kd.krw(S) - ki.krw(S)) / (pd - pi);
  const double dn = (kd.krn(S) - ki.krn(S)) / (pd - pi);
  const double den = w + M_ * n;
  const double f = w / den;
  const double df = M_ * (dw * n - w * dn) / (den * den);
  return df + N_g_ * (dn * f + n * df);
}

DimensionlessGroups nondimensionalize(const DimensionalParams& d, double tau_dimensional) {
  if (d.v == 0.0 || d.sigma == 0.0 || d.phi == 0.0) {
    throw std::invalid_argument("v, sigma and phi must be nonzero");
  }
  if (!(d.K > 0.0) || !(d.mu_n > 0.0) || !(d.H > 0.0)) {
    throw std::invalid_argument("K, mu_n and H must be positive");
  }
  const double p_r = d.sigma * std::sqrt(d.phi / d.K);
  DimensionlessGroups g;
  g.N_g = d.K * (d.rho_w - d.rho_n) * d.g / (d.v * d.mu_n);
  g.N_c = d.K * p_r / (d.v * d.mu_n * d.H);
  g.tau_tilde = d.mu_n * d.v * d.v * tau_dimensional / (d.sigma * d.sigma * d.phi * d.phi);
  return g;
}

}  // namespace twophase
