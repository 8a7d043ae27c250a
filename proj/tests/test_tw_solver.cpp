#include "fixtures.hpp"
#include "oracles.hpp"

#include "twophase/tw_solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>

using namespace twophase;

namespace {

const TravelingWaveSolver& solver() {
  static const TravelingWaveSolver tw(FluxGeometry(fixtures::reference_model(), 0.1));
  return tw;
}

// w at S by linear interpolation along the recorded curve (S increases along it).
double w_at(const WCurve& c, double S) {
  const auto it = std::lower_bound(c.S.begin(), c.S.end(), S);
  REQUIRE(it != c.S.begin());
  REQUIRE(it != c.S.end());
  const auto k = static_cast<std::size_t>(it - c.S.begin());
  const double t = (S - c.S[k - 1]) / (c.S[k] - c.S[k - 1]);
  return c.w[k - 1] + t * (c.w[k] - c.w[k - 1]);
}

double top_of(const WCurve& c) { return c.S_m; }

}  // namespace

TEST_CASE("Rankine-Hugoniot speed") {
  const Model m = fixtures::reference_model();
  const auto ref = oracle::reference_flux();
  const double pB = m.pc(Branch::imbibition, 0.1), pT = m.pc(Branch::imbibition, 0.4);
  const double expect = static_cast<double>((ref.F(0.4L) - ref.F(0.1L)) / 0.3L);
  CHECK(rh_speed(m, 0.1, pB, 0.4, pT) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(rh_speed(m, 0.1, pB, 0.1 + 1e-7, pT) ==
        doctest::Approx(m.dflux(Branch::imbibition, 0.1).F).epsilon(1e-5));
  CHECK_THROWS_AS(rh_speed(m, 0.1, pB, 0.1, pB), std::invalid_argument);

  const Model lin(fixtures::reference_capillary(0.0), {brooks_corey(1.0), brooks_corey(1.0)}, 1.0, 0.0);
  CHECK(rh_speed(lin, 0.2, 1.0, 0.7, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("critical taus") {
  const auto& tw = solver();
  const auto ct = tw.critical_taus(0.4);
  CHECK(ct.tau_i < ct.tau_d);
  CHECK(ct.tau_i == doctest::Approx(0.0452).epsilon(1e-3 / 0.0452));

  Model doubled(CapillaryModel{{7.0, 0.92}, {14.0, 0.9}, 0.0},
                preset_permeability(FluxPreset::brooks_corey), 1.0, 1.0);
  const TravelingWaveSolver tw2(FluxGeometry(doubled, 0.1));
  const auto ct2 = tw2.critical_taus(0.4);
  CHECK(ct2.tau_i == doctest::Approx(4.0 * ct.tau_i).epsilon(1e-10));
  CHECK(ct2.tau_d == doctest::Approx(4.0 * ct.tau_d).epsilon(1e-10));
}

TEST_CASE("monotone connection thresholds") {
  const auto& tw = solver();
  const double S_T = 0.4;
  const double tm = tw.tau_m(S_T);
  CHECK(tm >= tw.tau_bar_m(S_T));
  CHECK(tm <= tw.critical_taus(S_T).tau_i);
  CHECK(tw.S_m(0.9 * tm, S_T) == doctest::Approx(S_T).epsilon(1e-8));
  CHECK(tw.S_m(1.5 * tm, S_T) > S_T);
  // the bisection brackets tau_m from both sides
  CHECK_FALSE(tw.exceeds_target(tm * (1.0 - 1e-5), S_T));
  CHECK(tw.exceeds_target(tm * (1.0 + 1e-5), S_T));
}

TEST_CASE("maximal saturation of the w curve") {
  const auto& tw = solver();
  const auto star = tw.geometry().star_pair();
  SUBCASE("below S_*") {
    for (double S_T : {0.3, 0.4}) {
      const double g = *tw.geometry().gamma(S_T);
      for (double tau : {0.1, 1.0, 5.0}) {
        const double Sm = tw.S_m(tau, S_T);
        CHECK(Sm >= S_T);
        CHECK(Sm < g);
      }
    }
  }
  SUBCASE("above S_* and tau_c") {
    const double S_T = 0.5;
    REQUIRE(S_T > star.S_star);
    const double tc = tw.tau_c(S_T);
    const auto w = tw.integrate_w(2.0 * tc, S_T);
    CHECK(w.blowup);
    CHECK(w.S_m == 1.0);
  }
}

TEST_CASE("tau_c") {
  const auto& tw = solver();
  const auto star = tw.geometry().star_pair();
  const double S_bar = tw.geometry().S_bar();
  const double a = tw.tau_c(star.S_star + 0.25 * (S_bar - star.S_star));
  const double b = tw.tau_c(star.S_star + 0.5 * (S_bar - star.S_star));
  const double c = tw.tau_c(star.S_star + 0.75 * (S_bar - star.S_star));
  CHECK(a > b);
  CHECK(b > c);
  CHECK(tw.tau_c(star.S_star + 1e-3) > a);
  CHECK(tw.tau_c(S_bar) == doctest::Approx(tw.tau_bar()).epsilon(1e-4));
  CHECK_THROWS_AS(tw.tau_c(0.35), std::domain_error);
}

TEST_CASE("bifurcation curves") {
  const auto& tw = solver();
  const auto& geo = tw.geometry();
  const double tb = tw.tau_bar();
  CHECK(tw.S_check(0.5 * tb) == geo.S_bar());
  CHECK(tw.S_hat(0.5 * tb) == doctest::Approx(geo.S_bar()));
  const double taus[] = {0.3, 0.6, 1.5};
  const auto curves = tw.bifurcation_curves(taus);
  REQUIRE(curves.tau.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(curves.S_hat[k] == doctest::Approx(geo.beta(curves.S_check[k])).epsilon(1e-8));
    if (k > 0) {
      CHECK(curves.S_hat[k] > curves.S_hat[k - 1]);
      CHECK(curves.S_check[k] < curves.S_check[k - 1]);
    }
  }
}

TEST_CASE("solution set classification") {
  const auto& tw = solver();
  CHECK(tw.classify_pair(0.35, 1.0) == SolutionSet::A);
  CHECK(tw.classify_pair(0.55, 1.0) == SolutionSet::B);
  CHECK(tw.classify_pair(0.8, 1.0) == SolutionSet::C);
}

TEST_CASE("w is decreasing in tau") {
  const auto& tw = solver();
  const double S_T = 0.4;
  const std::pair<double, double> pairs[] = {{0.01, 0.03}, {0.03, 0.1}, {0.1, 0.3}, {0.3, 1.0}, {1.0, 3.0}};
  for (auto [t1, t2] : pairs) {
    const auto w1 = tw.integrate_w(t1, S_T), w2 = tw.integrate_w(t2, S_T);
    const double top = std::min(top_of(w1), top_of(w2));
    for (int k = 1; k <= 20; ++k) {
      const double S = 0.1 + (top - 0.1) * k / 21.0;
      CAPTURE(t1);
      CAPTURE(S);
      CHECK(w_at(w2, S) < w_at(w1, S));
    }
  }
}

TEST_CASE("w is decreasing in S_T") {
  const auto& tw = solver();
  const std::pair<double, double> pairs[] = {{0.2, 0.25}, {0.25, 0.3}, {0.3, 0.35}, {0.35, 0.4}, {0.4, 0.45}};
  for (double tau : {0.2, 1.0}) {
    for (auto [s1, s2] : pairs) {
      const auto w1 = tw.integrate_w(tau, s1), w2 = tw.integrate_w(tau, s2);
      const double top = std::min(top_of(w1), top_of(w2));
      for (int k = 1; k <= 20; ++k) {
        const double S = 0.1 + (top - 0.1) * k / 21.0;
        CAPTURE(s1);
        CAPTURE(S);
        CHECK(w_at(w2, S) < w_at(w1, S));
      }
    }
  }
}

TEST_CASE("squared gap bounds and the lower bound on w") {
  const auto& tw = solver();
  const auto& geo = tw.geometry();
  const Model& m = tw.model();
  const double S_T = 0.4;
  const double c = geo.rh_slope(S_T);
  const std::pair<double, double> pairs[] = {{0.01, 0.03}, {0.03, 0.1}, {0.1, 0.3}, {0.3, 1.0}, {1.0, 3.0}};
  for (auto [t1, t2] : pairs) {
    const auto w1 = tw.integrate_w(t1, S_T), w2 = tw.integrate_w(t2, S_T);
    const double top = std::min(top_of(w1), top_of(w2));
    for (int k = 1; k <= 20; ++k) {
      const double S = 0.1 + (top - 0.1) * k / 21.0;
      const double pi = m.pc(Branch::imbibition, S);
      const double v1 = pi - w_at(w1, S), v2 = pi - w_at(w2, S);
      const double Phi = geo.Phi(S, S_T).value;
      CAPTURE(t1);
      CAPTURE(S);
      CHECK(v2 * v2 - v1 * v1 > 0.0);
      CHECK(v2 * v2 - v1 * v1 < 2.0 * c * (t2 - t1) * Phi);
    }
  }
  for (double tau : {0.05, 0.5, 2.0}) {
    const auto w = tw.integrate_w(tau, S_T);
    for (std::size_t k = 1; k + 1 < w.S.size(); ++k) {
      const double S = w.S[k];
      const double bound = m.pc(Branch::imbibition, S) - std::sqrt(2.0 * c * tau * geo.Phi(S, S_T).value);
      CAPTURE(S);
      CHECK(w.w[k] > bound);
    }
  }
}

TEST_CASE("orbit invariants") {
  const auto& tw = solver();
  const Model& m = tw.model();
  const double S_T = 0.4;
  const auto o = tw.integrate_orbit(0.25, S_T);
  const double pB = m.pc(Branch::imbibition, 0.1);
  CHECK(o.c == doctest::Approx(rh_speed(m, 0.1, pB, S_T, m.pc(Branch::imbibition, S_T))));
  CHECK(m.classify(0.1, pB) == Region::scanning);
  REQUIRE(o.samples.size() > 10);
  for (std::size_t k = 1; k < o.samples.size(); ++k) {
    const auto& a = o.samples[k - 1];
    const auto& b = o.samples[k];
    const Region r = m.classify(a.S, a.p);
    if (r == Region::imbibition && m.classify(b.S, b.p) == r) CHECK(b.S >= a.S);
    if (r == Region::drainage && m.classify(b.S, b.p) == r) CHECK(b.S <= a.S);
  }
  CHECK(o.outcome == OrbitOutcome::FiniteTurnsToDrainage);
  REQUIRE(o.p_T);
  CHECK(*o.p_T == doctest::Approx(m.pc(Branch::drainage, S_T)).epsilon(1e-4));
}

TEST_CASE("small tau orbits follow the imbibition curve") {
  const auto& tw = solver();
  const Model& m = tw.model();
  const auto o = tw.integrate_orbit(0.005, 0.4);
  CHECK(o.outcome == OrbitOutcome::MonotoneToImbibition);
  double worst = 0.0;
  for (const auto& s : o.samples) {
    if (s.S > 0.12 && s.S < 0.38) worst = std::max(worst, std::abs(s.p - m.pc(Branch::imbibition, s.S)));
  }
  CHECK(worst < 0.05 * m.pc(Branch::imbibition, 0.4));
}

TEST_CASE("drainage waves") {
  const auto& tw = solver();
  const double tau = 1.0, S_T = 0.55;
  const auto& geo = tw.geometry();
  const double Sh = tw.S_hat(tau);
  const double c_i = geo.rh_slope(Sh);
  const auto d = tw.drainage_orbit(tau, S_T);
  CHECK(d.c < c_i);
  CHECK_THROWS_AS(tw.drainage_orbit(tau, Sh + 0.01), std::domain_error);
}

TEST_CASE("hysteretic permeability thresholds") {
  const Model m = fixtures::hysteretic_model(0.5);
  const BaseState base = drainage_base(m, 0.3);
  SUBCASE("plateau configuration") {
    const double ts = tau_star(m, base, 0.5, Branch::imbibition);
    CHECK(ts > 0.0);
    CHECK(ts < 0.5);
    CHECK(scenario_b_case({m, base, 0.5, 0.5}) == ScenarioBCase::Plateau);
    CHECK(scenario_b_case({m.with_tau(0.5 * ts), base, 0.5, 0.5 * ts}) == ScenarioBCase::Imbibition);
  }
  SUBCASE("bounded away from zero") {
    const double bound = scenario_b_tau_bound(m, base, Branch::imbibition);
    CHECK(bound > 0.0);
    CHECK(std::isfinite(bound));
  }
  SUBCASE("frozen data") {
    const BaseState high = drainage_base(m, 0.5);
    // F_i at 0.55 lies below the drainage flux at the base
    REQUIRE(m.flux(Branch::imbibition, 0.55).F < m.flux(high.S_B, high.p_B).F);
    CHECK(scenario_b_case({m, high, 0.55, 0.5}) == ScenarioBCase::Frozen);
    CHECK(tau_star(m, high, 0.55, Branch::imbibition) == kInfinity);
    const double pf = frozen_pressure(m, high, 0.55);
    CHECK(m.classify(0.55, pf) == Region::scanning);
    CHECK(m.flux(0.55, pf).F == doctest::Approx(m.flux(high.S_B, high.p_B).F).epsilon(1e-10));
  }
  SUBCASE("rarefaction and drainage cases") {
    CHECK(scenario_b_case({m, base, 0.95, 0.02}) == ScenarioBCase::Rarefaction);
    const BaseState wet = drainage_base(m, 0.95);
    const auto c = scenario_b_case({m, wet, 0.3, 0.02});
    CHECK((c == ScenarioBCase::Rarefaction || c == ScenarioBCase::Drainage));
  }
}
