#include "fixtures.hpp"

#include "twophase/pde_solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace twophase;

namespace {

SolverConfig scenario(Scenario s, double t_end = 1.0) {
  SolverConfig c;
  c.bc_mode = s;
  c.t_end = t_end;
  return c;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// Largest |p - p_orbit(S)| over cells whose saturation lies well inside (S_B, S_T).
double orbit_deviation(double dz) {
  const double tau = 0.2, S_T = 0.2;
  const Model m = fixtures::reference_model(tau);
  const TravelingWaveSolver tw(FluxGeometry(m, 0.1));
  const Orbit orbit = tw.integrate_orbit(tau, S_T);
  REQUIRE(orbit.outcome == OrbitOutcome::MonotoneToImbibition);

  std::vector<std::pair<double, double>> Sp;
  for (const auto& s : orbit.samples) Sp.emplace_back(s.S, s.p);
  std::sort(Sp.begin(), Sp.end());
  auto p_of = [&](double S) {
    auto it = std::lower_bound(Sp.begin(), Sp.end(), std::pair{S, -HUGE_VAL});
    const auto& [S1, p1] = *it;
    const auto& [S0, p0] = *(it - 1);
    return p0 + (p1 - p0) * (S - S0) / (S1 - S0);
  };

  const PdeSolver pde({m, 0.1, S_T}, Grid::with_spacing(-10.0, 50.0, dz), scenario(Scenario::A, 30.0));
  const auto res = pde.run({});
  double dev = 0.0;
  for (std::size_t k = 0; k < res.final_state.S.size(); ++k) {
    const double S = res.final_state.S[k];
    if (S > 0.11 && S < S_T - 0.01) dev = std::max(dev, std::abs(res.final_state.p[k] - p_of(S)));
  }
  return dev;
}

}  // namespace

TEST_CASE("grid") {
  const Grid g(-10.0, 10.0, 40);
  CHECK(g.dz() == 0.5);
  CHECK(g.centers().front() == -9.75);
  CHECK(g.centers().back() == 9.75);
  CHECK(Grid::with_spacing(-10.0, 500.0, 0.05).size() == 10200);
  CHECK_THROWS_AS(Grid(1.0, 10.0, 40), std::invalid_argument);
  CHECK_THROWS_AS(Grid(-1.0, 10.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Grid::with_spacing(-1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("smoothed initial step") {
  const Grid g(-10.5, 10.5, 21);  // centres on the integers
  const auto S = initial_condition(g, 0.1, 0.6, 1.0);
  auto at = [&](int z) { return S[static_cast<std::size_t>(z + 10)]; };
  CHECK(at(-1) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(at(0) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(at(1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(at(-7) == 0.6);
  CHECK(at(7) == 0.1);
  const auto fine = initial_condition(Grid(-10.0, 10.0, 2000), 0.1, 0.6, 1.0);
  CHECK(std::is_sorted(fine.rbegin(), fine.rend()));
  CHECK_THROWS_AS(initial_condition(g, 0.1, 0.6, 0.0), std::domain_error);
  CHECK_THROWS_AS(initial_condition(g, 0.1, 0.6, 11.0), std::domain_error);
}

TEST_CASE("outflow pressure follows the scenario") {
  const Model a = fixtures::reference_model(1.0);
  const Grid g(-10.0, 10.0, 40);
  CHECK(PdeSolver({a, 0.1, 0.4}, g, scenario(Scenario::A)).p_boundary() ==
        a.pc(Branch::imbibition, 0.1));
  const Model b = fixtures::hysteretic_model(0.5);
  CHECK(PdeSolver({b, 0.3, 0.5}, g, scenario(Scenario::B)).p_boundary() ==
        b.pc(Branch::drainage, 0.3));
}

TEST_CASE("default step and advection") {
  const Grid g = Grid::with_spacing(-10.0, 10.0, 0.1);
  const Model a = fixtures::reference_model(0.02);
  const PdeSolver pa({a, 0.1, 0.4}, g, scenario(Scenario::A));
  CHECK(pa.dt() == doctest::Approx(std::min(0.05 / max_flux_speed(a), 0.01)));
  CHECK(pa.L() == doctest::Approx(50.0));
  CHECK(pa.advection() == Advection::central);
  const PdeSolver pb({fixtures::hysteretic_model(0.5), 0.3, 0.5}, g, scenario(Scenario::B));
  CHECK(pb.advection() == Advection::upwind);
  CHECK(parse_advection(to_string(Advection::automatic)) == Advection::automatic);
  CHECK(parse_pressure_scheme("lscheme") == PressureScheme::lscheme);
  CHECK_THROWS_AS(parse_advection("donor"), std::invalid_argument);

  SolverConfig bad = scenario(Scenario::A);
  bad.dt = -1.0;
  CHECK_THROWS_AS(PdeSolver({a, 0.1, 0.4}, g, bad), std::invalid_argument);
  CHECK_THROWS_AS(PdeSolver({fixtures::reference_model(0.0), 0.1, 0.4}, g, scenario(Scenario::A)),
                  std::invalid_argument);
}

TEST_CASE("uniform state inside the scanning region is an equilibrium") {
  const Model m = fixtures::reference_model(1.0);
  const Grid g(-10.0, 10.0, 80);
  const PdeSolver pde({m, 0.3, 0.3}, g, scenario(Scenario::A, 5.0));
  GridState st;
  st.S.assign(80, 0.3);
  // start midway between the branches; the pressure relaxes to the outflow value with S frozen
  st.p.assign(80, 0.5 * (m.pc(Branch::imbibition, 0.3) + m.pc(Branch::drainage, 0.3)));
  const auto res = pde.run_from(st, {});
  for (double S : res.final_state.S) CHECK(S == 0.3);
  for (double p : res.final_state.p) CHECK(p == doctest::Approx(pde.p_boundary()).epsilon(1e-7));
  CHECK(res.summary.max_mass_residual < 1e-12);
}

TEST_CASE("converged pressure is a fixed point") {
  const Model m = fixtures::reference_model(1.0);
  for (auto scheme : {PressureScheme::newton, PressureScheme::lscheme}) {
    SolverConfig cfg = scenario(Scenario::A);
    cfg.scheme = scheme;
    const PdeSolver pde({m, 0.1, 0.6}, Grid(-10.0, 30.0, 200), cfg);
    GridState st = pde.initial_state();
    CHECK(pde.solve_pressure(st.S, st.p) >= 1);
    auto again = st.p;
    CHECK(pde.solve_pressure(st.S, again) == 1);
    CHECK(max_abs_diff(again, st.p) < cfg.tol);
    // zero-gradient inflow: the ghost cell mirrors the first cell, so p_0 carries no diffusive flux
    CHECK(std::isfinite(st.p.front()));
  }
}

TEST_CASE("saturation update is explicit relaxation") {
  const Model m = fixtures::reference_model(0.5);
  const PdeSolver pde({m, 0.1, 0.6}, Grid(-10.0, 30.0, 200), scenario(Scenario::A));
  GridState st = pde.initial_state();
  const auto S0 = st.S;
  const double dt = pde.dt();
  const auto stats = pde.step(st, dt);
  CHECK(stats.halvings == 0);
  bool some_increase = false;
  for (std::size_t k = 0; k < S0.size(); ++k) {
    const double pi = m.pc(Branch::imbibition, S0[k]), pd = m.pc(Branch::drainage, S0[k]);
    const double p = st.p[k];
    if (p >= pi && p <= pd) {
      CHECK(st.S[k] == S0[k]);
    } else if (p < pi) {
      CHECK(st.S[k] >= S0[k]);
      CHECK(st.S[k] == doctest::Approx(S0[k] + dt * (pi - p) / 0.5).epsilon(1e-14));
      some_increase |= st.S[k] > S0[k];
    } else {
      CHECK(st.S[k] <= S0[k]);
    }
  }
  CHECK(some_increase);
}

TEST_CASE("discrete mass balance") {
  for (double tau : {0.05, 1.0}) {
    const Model m = fixtures::reference_model(tau);
    const PdeSolver pde({m, 0.1, 0.7}, Grid::with_spacing(-10.0, 30.0, 0.1), scenario(Scenario::A, 5.0));
    std::vector<double> residuals;
    const auto res = pde.run({}, [&](const GridState&, const StepStats& s) {
      residuals.push_back(s.mass_residual);
    });
    CAPTURE(tau);
    CHECK(res.summary.max_mass_residual < 1e-8);
    CHECK(residuals.size() == static_cast<std::size_t>(res.summary.steps));
    CHECK(res.final_state.t == 5.0);
  }
}

TEST_CASE("checkpoints land on the requested times") {
  const Model m = fixtures::reference_model(1.0);
  const PdeSolver pde({m, 0.1, 0.4}, Grid(-10.0, 30.0, 200), scenario(Scenario::A, 2.0));
  const double marks[] = {1.5, 0.0, 0.333, 7.0};
  const auto res = pde.run(marks);
  REQUIRE(res.checkpoints.size() == 3);
  CHECK(res.checkpoints[0].t == 0.0);
  CHECK(res.checkpoints[1].t == 0.333);
  CHECK(res.checkpoints[2].t == 1.5);
  CHECK(res.final_state.t == 2.0);
}

TEST_CASE("both pressure schemes agree") {
  const Model m = fixtures::reference_model(0.25);
  SolverConfig a = scenario(Scenario::A, 2.0), b = a;
  b.scheme = PressureScheme::lscheme;
  b.max_iter = 20000;
  const Grid g = Grid::with_spacing(-5.0, 10.0, 0.1);
  const auto ra = PdeSolver({m, 0.1, 0.55}, g, a).run({});
  const auto rb = PdeSolver({m, 0.1, 0.55}, g, b).run({});
  CHECK(max_abs_diff(ra.final_state.S, rb.final_state.S) < 1e-6);
  CHECK(rb.summary.total_iterations >= ra.summary.total_iterations);
}

TEST_CASE("hysteretic data below the base flux stays frozen") {
  const Model m = fixtures::hysteretic_model(0.02);
  const PdeSolver pde({m, 0.5, 0.55}, Grid::with_spacing(-10.0, 10.0, 0.1), scenario(Scenario::B, 5.0));
  const GridState st0 = pde.initial_state();
  const auto res = pde.run({});
  CHECK(max_abs_diff(res.final_state.S, st0.S) < 1e-12);
}

TEST_CASE("traveling front follows the phase-plane orbit under refinement") {
  const double coarse = orbit_deviation(0.2), fine = orbit_deviation(0.1);
  CAPTURE(coarse);
  CAPTURE(fine);
  CHECK(fine < coarse);
  CHECK(fine < 5e-3);
}

TEST_CASE("Newton settles when active sets flip on a coarse grid") {
  SolverConfig cfg = scenario(Scenario::B, 3.0);
  cfg.max_iter = 60;
  const PdeSolver pde({fixtures::hysteretic_model(0.02), 0.3, 0.95},
                      Grid::with_spacing(-10.0, 190.0, 0.2), cfg);
  RunSummary s;
  CHECK_NOTHROW(s = pde.run({}).summary);
  CHECK(s.max_iterations < 60);
  CHECK(s.max_mass_residual < 1e-8);
}
