#pragma once

#include <string_view>

namespace twophase {

enum class Branch { imbibition, drainage };
enum class Region { imbibition, scanning, drainage };
enum class Phase { wetting, nonwetting };

std::string_view to_string(Branch b);
std::string_view to_string(Region r);

// p_c(S) = Lambda (S^{-1/m} - 1)^{1-m}
struct VanGenuchten {
  double Lambda = 1.0;
  double m = 0.5;

  double pc(double S) const;
  double dpc(double S) const;
};

struct CapillaryModel {
  VanGenuchten imbibition{3.5, 0.92};
  VanGenuchten drainage{7.0, 0.9};
  double tau = 0.0;
};

// k_rw = a S^q, k_rn = b (1 - S^s)^r. Brooks-Corey is a = b = s = 1, r = q.
struct PowerLawPermeability {
  double a = 1.0;
  double q = 2.0;
  double b = 1.0;
  double s = 1.0;
  double r = 2.0;

  double krw(double S) const;
  double dkrw(double S) const;
  double krn(double S) const;
  double dkrn(double S) const;

  bool operator==(const PowerLawPermeability&) const = default;
};

PowerLawPermeability brooks_corey(double q);

struct PermeabilityModel {
  PowerLawPermeability imbibition = brooks_corey(2.0);
  PowerLawPermeability drainage = brooks_corey(2.0);

  bool hysteretic() const { return !(imbibition == drainage); }
};

enum class FluxPreset {
  brooks_corey,          // k_rw = S^q, k_rn = (1-S)^q on both branches
  hysteretic_bc,         // f_i = S^2/(S^2 + 3(1-S)^2), f_d = S^2/(S^2 + 2(1-S)^2)
  hysteretic_quadratic,  // f_i = S^2/(S^2 + 3(1-S^2)),  f_d = S^2/(S^2 + 2(1-S^2))
};

FluxPreset parse_flux_preset(std::string_view name);
std::string_view to_string(FluxPreset p);
PermeabilityModel preset_permeability(FluxPreset p, double q_i = 2.0, double q_d = 2.0);

struct FluxValue {
  double f = 0.0;
  double h = 0.0;
  double F = 0.0;
};

class Model {
 public:
  Model() = default;
  Model(CapillaryModel cap, PermeabilityModel perm, double M, double N_g);

  const CapillaryModel& capillary() const { return cap_; }
  const PermeabilityModel& permeability() const { return perm_; }
  double tau() const { return cap_.tau; }
  double M() const { return M_; }
  double N_g() const { return N_g_; }
  bool hysteretic_permeability() const { return perm_.hysteretic(); }
  Model with_tau(double tau) const;

  double pc(Branch b, double S) const;
  double dpc(Branch b, double S) const;

  Region classify(double S, double p) const;
  double relaxation(double S, double p) const;
  double krel(Phase ph, double S, double p) const;

  FluxValue flux(double S, double p) const;
  FluxValue flux(Branch b, double S) const;
  // dF/dS, df/dS, dh/dS on a pure branch
  FluxValue dflux(Branch b, double S) const;
  double d2F(Branch b, double S) const;
  // dF/dp inside the scanning region, zero elsewhere
  double dF_dp(double S, double p) const;

 private:
  FluxValue compose(double krw, double krn) const;
  const PowerLawPermeability& perm(Branch b) const;
  const VanGenuchten& curve(Branch b) const;

  CapillaryModel cap_{};
  PermeabilityModel perm_{};
  double M_ = 1.0;
  double N_g_ = 0.0;
};

// Central difference with step 1e-6 max(1,|S|), for user supplied curves.
template <class Fn>
double central_difference(Fn&& fn, double S) {
  const double h = 1e-6 * (S > 1.0 ? S : 1.0);
  return (fn(S + h) - fn(S - h)) / (2.0 * h);
}

struct DimensionalParams {
  double mu_n = 1e-3;
  double mu_w = 1e-3;
  double v = 1e-5;
  double sigma = 0.07;
  double phi = 0.3;
  double K = 1e-11;
  double rho_w = 1000.0;
  double rho_n = 800.0;
  double g = 9.81;
  double H = 1.0;
};

struct DimensionlessGroups {
  double N_g = 0.0;
  double N_c = 0.0;
  double tau_tilde = 0.0;
};

DimensionlessGroups nondimensionalize(const DimensionalParams& d, double tau_dimensional);

}  // namespace twophase
