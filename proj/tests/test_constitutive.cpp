#include "fixtures.hpp"
#include "oracles.hpp"

#include "twophase/constitutive.hpp"

#include <doctest.h>

#include <cmath>

using namespace twophase;

TEST_CASE("van Genuchten curve matches the closed form") {
  const VanGenuchten vg{3.5, 0.92};
  CHECK(vg.pc(1.0) == 0.0);
  for (double S : {0.05, 0.1, 0.3, 0.5, 0.77, 0.99}) {
    const double ref = static_cast<double>(oracle::van_genuchten(3.5L, 0.92L, S));
    CHECK(vg.pc(S) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK_THROWS_AS(vg.pc(0.0), std::domain_error);
  CHECK_THROWS_AS(vg.pc(1.2), std::domain_error);
}

TEST_CASE("capillary curves are decreasing and ordered") {
  const Model m = fixtures::reference_model();
  double prev_i = INFINITY, prev_d = INFINITY;
  for (int k = 1; k < 1000; ++k) {
    const double S = k / 1000.0;
    const double pi = m.pc(Branch::imbibition, S), pd = m.pc(Branch::drainage, S);
    CHECK(pi < pd);
    CHECK(pi < prev_i);
    CHECK(pd < prev_d);
    CHECK(m.dpc(Branch::imbibition, S) < 0.0);
    prev_i = pi;
    prev_d = pd;
  }
}

TEST_CASE("dpc agrees with a difference quotient") {
  const VanGenuchten vg{7.0, 0.9};
  for (double S : {0.2, 0.5, 0.8}) {
    CHECK(vg.dpc(S) == doctest::Approx(central_difference([&](double x) { return vg.pc(x); }, S))
                           .epsilon(1e-6));
  }
}

TEST_CASE("region classification and relaxation sign") {
  const Model m = fixtures::reference_model();
  const double S = 0.5;
  const double pi = m.pc(Branch::imbibition, S), pd = m.pc(Branch::drainage, S);
  CHECK(m.classify(S, pi - 1.0) == Region::imbibition);
  CHECK(m.classify(S, pi) == Region::scanning);
  CHECK(m.classify(S, pd) == Region::scanning);
  CHECK(m.classify(S, 0.5 * (pi + pd)) == Region::scanning);
  CHECK(m.classify(S, pd + 1.0) == Region::drainage);
  CHECK(m.relaxation(S, 0.5 * (pi + pd)) == 0.0);
  CHECK(m.relaxation(S, pi - 0.25) == doctest::Approx(0.25));
  CHECK(m.relaxation(S, pd + 0.25) == doctest::Approx(-0.25));
}

TEST_CASE("permeability interpolates across the scanning region") {
  const Model m = fixtures::hysteretic_model(0.5);
  const auto& k = m.permeability();
  for (double S : {0.2, 0.5, 0.8}) {
    const double pi = m.pc(Branch::imbibition, S), pd = m.pc(Branch::drainage, S);
    CHECK(m.krel(Phase::wetting, S, pi) == doctest::Approx(k.imbibition.krw(S)));
    CHECK(m.krel(Phase::wetting, S, pd) == doctest::Approx(k.drainage.krw(S)));
    CHECK(m.krel(Phase::wetting, S, 0.5 * (pi + pd)) ==
          doctest::Approx(0.5 * (k.imbibition.krw(S) + k.drainage.krw(S))));
    CHECK(k.imbibition.krw(S) <= k.drainage.krw(S));
    CHECK(k.drainage.krn(S) <= k.imbibition.krn(S));
  }
  CHECK(m.krel(Phase::nonwetting, 1.0, 3.0) == 0.0);
}

TEST_CASE("flux functions") {
  SUBCASE("symmetric quadratic flux at one half") {
    const Model m(fixtures::reference_capillary(0.0), preset_permeability(FluxPreset::brooks_corey),
                  1.0, 0.0);
    CHECK(m.flux(Branch::imbibition, 0.5).f == doctest::Approx(0.5));
  }
  SUBCASE("closed form with gravity") {
    const Model m = fixtures::reference_model();
    const auto ref = oracle::reference_flux();
    for (double S : {0.01, 0.1, 0.4, 0.55, 0.9, 1.0}) {
      CHECK(m.flux(Branch::imbibition, S).F == doctest::Approx(static_cast<double>(ref.F(S))).epsilon(1e-13));
      CHECK(m.flux(Branch::imbibition, S).h == doctest::Approx(static_cast<double>(ref.h(S))).epsilon(1e-13));
    }
    CHECK(m.flux(Branch::imbibition, 1.0).F == 1.0);
    CHECK(m.flux(Branch::imbibition, 1e-300).F == doctest::Approx(0.0));
  }
  SUBCASE("branch derivatives") {
    const Model m = fixtures::hysteretic_model(0.5);
    for (Branch b : {Branch::imbibition, Branch::drainage}) {
      for (double S : {0.15, 0.5, 0.85}) {
        const double fd = central_difference([&](double x) { return m.flux(b, x).F; }, S);
        CHECK(m.dflux(b, S).F == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  SUBCASE("hysteretic presets keep imbibition below drainage") {
    for (auto p : {FluxPreset::hysteretic_bc, FluxPreset::hysteretic_quadratic}) {
      const Model m = fixtures::hysteretic_model(0.5, p);
      CHECK(m.hysteretic_permeability());
      CHECK(m.flux(Branch::imbibition, 0.5).f < m.flux(Branch::drainage, 0.5).f);
    }
    const Model q = fixtures::hysteretic_model(0.5, FluxPreset::hysteretic_quadratic);
    CHECK(q.flux(Branch::imbibition, 0.5).f == doctest::Approx(0.25 / (0.25 + 3.0 * 0.75)));
    CHECK(q.flux(Branch::drainage, 0.5).f == doctest::Approx(0.25 / (0.25 + 2.0 * 0.75)));
    CHECK_FALSE(fixtures::reference_model().hysteretic_permeability());
  }
  SUBCASE("pressure derivative inside the scanning region") {
    const Model m = fixtures::hysteretic_model(0.5);
    const double S = 0.6;
    const double pi = m.pc(Branch::imbibition, S), pd = m.pc(Branch::drainage, S);
    const double p = 0.3 * pi + 0.7 * pd;
    const double fd = central_difference([&](double x) { return m.flux(S, x).F; }, p);
    CHECK(m.dF_dp(S, p) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(m.dF_dp(S, pd + 1.0) == 0.0);
  }
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(Model(fixtures::reference_capillary(0.0), {}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Model(fixtures::reference_capillary(-1.0), {}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Model({{1.0, 1.5}, {1.0, 0.5}, 0.0}, {}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(parse_flux_preset("linear"), std::invalid_argument);
  CHECK(parse_flux_preset(to_string(FluxPreset::hysteretic_quadratic)) == FluxPreset::hysteretic_quadratic);
}

TEST_CASE("dimensionless groups") {
  DimensionalParams d;
  CHECK(nondimensionalize(d, 0.0).tau_tilde == 0.0);
  const double t1 = nondimensionalize(d, 10.0).tau_tilde;
  d.v *= 2.0;
  CHECK(nondimensionalize(d, 10.0).tau_tilde == doctest::Approx(4.0 * t1));
  d.rho_n = d.rho_w;
  CHECK(nondimensionalize(d, 10.0).N_g == 0.0);
}
