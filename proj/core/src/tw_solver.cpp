#include "twophase/tw_solver.hpp"

#include "twophase/numerics.hpp"
#include "twophase/ode.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace twophase {

std::string_view to_string(OrbitOutcome o) {
  switch (o) {
    case OrbitOutcome::MonotoneToImbibition: return "MonotoneToImbibition";
    case OrbitOutcome::FiniteTurnsToImbibition: return "FiniteTurnsToImbibition";
    case OrbitOutcome::FiniteTurnsToDrainage: return "FiniteTurnsToDrainage";
    case OrbitOutcome::InfiniteSpiral: return "InfiniteSpiral";
    case OrbitOutcome::ReachesBeta: return "ReachesBeta";
    case OrbitOutcome::FullSaturationBlowup: return "FullSaturationBlowup";
    case OrbitOutcome::DrainageConnection: return "DrainageConnection";
    case OrbitOutcome::Frozen: return "Frozen";
    case OrbitOutcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(SolutionSet s) {
  switch (s) {
    case SolutionSet::A: return "A";
    case SolutionSet::B: return "B";
    case SolutionSet::C: return "C";
    case SolutionSet::OutOfScope: return "OutOfScope";
  }
  return "?";
}

std::string_view to_string(ScenarioBCase c) {
  switch (c) {
    case ScenarioBCase::Imbibition: return "imbibition";
    case ScenarioBCase::Drainage: return "drainage";
    case ScenarioBCase::Frozen: return "frozen";
    case ScenarioBCase::Plateau: return "plateau";
    case ScenarioBCase::Rarefaction: return "rarefaction";
  }
  return "?";
}

double rh_speed(const Model& model, double S_B, double p_B, double S_T, double p_T) {
  if (S_T == S_B) throw std::invalid_argument("Rankine-Hugoniot speed needs S_T != S_B");
  return (model.flux(S_T, p_T).F - model.flux(S_B, p_B).F) / (S_T - S_B);
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

Region region_of(const Model& m, const State2& y) {
  const double S = std::clamp(y[0], 1e-14, 1.0);
  if (y[1] < m.pc(Branch::imbibition, S)) return Region::imbibition;
  if (y[1] > m.pc(Branch::drainage, S)) return Region::drainage;
  return Region::scanning;
}

void normalize(Orbit& o, double S_mid) {
  auto& s = o.samples;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double a = s[k - 1].S - S_mid, b = s[k].S - S_mid;
    if (a == 0.0 || (a < 0.0) != (b < 0.0)) {
      const double w = a == b ? 0.0 : a / (a - b);
      const double xi0 = s[k - 1].xi + w * (s[k].xi - s[k - 1].xi);
      for (auto& x : s) x.xi -= xi0;
      return;
    }
  }
}

}  // namespace

Orbit connect(const Model& model, double S0, double p0, double F0, double S_T, double c, double tau,
              const OrbitOptions& opt) {
  if (!(tau > 0.0)) throw std::invalid_argument("orbit integration needs tau > 0");
  if (c == 0.0) throw std::invalid_argument("orbit integration needs a nonzero speed");
  const int dir = sign_of(S_T - S0);
  if (dir == 0) throw std::invalid_argument("orbit needs S_T != S0");
  const Branch facing = dir > 0 ? Branch::imbibition : Branch::drainage;
  const double ctau = c * tau;

  auto G = [&](double S, double p) {
    const auto v = model.flux(S, p);
    return (v.F - F0 - c * (S - S0)) / v.h;
  };
  Rhs2 rhs = [&](const State2& y, State2& dy, double) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      dy = {kInfinity, kInfinity};
      return;
    }
    const double S = std::clamp(y[0], 1e-12, 1.0 - 1e-12);
    dy[0] = model.relaxation(S, y[1]) / ctau;
    dy[1] = G(S, y[1]);
  };

  Orbit out;
  out.c = c;
  const double pj0 = model.pc(facing, S0);
  State2 y0{S0, pj0};
  if (std::abs(p0 - pj0) > 1e-12 * (1.0 + std::abs(pj0))) {
    out.samples.push_back({0.0, S0, p0});
  }
  const auto Fj = model.flux(facing, S0);
  if (std::abs(Fj.F - F0) <= 1e-12) {
    const double a = model.dpc(facing, S0);
    const double g = (model.dflux(facing, S0).F - c) / Fj.h;
    if (g >= 0.0) throw NumericalError("base state is not a saddle of the traveling-wave system");
    const double A = a / ctau;
    const double lambda = 0.5 * (A + std::sqrt(A * A - 4.0 * g / ctau));
    const double u = dir * opt.eps;
    y0 = {S0 + u, pj0 + (a - ctau * lambda) * u};
  }

  DenseDopri ode(rhs, {1e-9, 1e-11, opt.max_dxi});
  double xi = out.samples.empty() ? 0.0 : 1.0;
  ode.initialize(y0, xi, 1e-4);
  out.samples.push_back({xi, y0[0], y0[1]});

  // A start on a region boundary takes the region it is moving into.
  auto heading = [&](const State2& y) {
    Region r = region_of(model, y);
    if (r != Region::scanning) return r;
    State2 dy{};
    rhs(y, dy, 0.0);
    const double n = std::hypot(dy[0], dy[1]);
    if (n == 0.0) return r;
    return region_of(model, {y[0] + 1e-10 * dy[0] / n, y[1] + 1e-10 * dy[1] / n});
  };
  Region reg = heading(y0);
  int side = sign_of(y0[0] - S_T);
  double amp = 0.0;
  std::vector<double> amps;
  bool left_facing = false;
  const double pi_T = model.pc(Branch::imbibition, S_T);
  const double pd_T = model.pc(Branch::drainage, S_T);

  auto finish = [&](OrbitOutcome o) {
    out.outcome = o;
    normalize(out, 0.5 * (S0 + S_T));
    return out;
  };

  for (long step = 0; step < opt.max_steps; ++step) {
    auto [t0, t1] = ode.step();
    State2 y = ode.state();
    Region r1 = region_of(model, y);
    if (r1 != reg) {
      // Restart at the region boundary so the kink in R is never inside a step.
      const Branch crossed =
          (reg == Region::drainage || r1 == Region::drainage) ? Branch::drainage : Branch::imbibition;
      EventFn g = [&model, crossed](double, const State2& s) {
        return s[1] - model.pc(crossed, std::clamp(s[0], 1e-14, 1.0));
      };
      const double tc = ode.locate(g, t0, t1);
      y = ode.state_at(tc);
      t1 = tc;
      ode.initialize(y, tc, std::max(1e-8, 0.1 * (tc - t0)));
      r1 = heading(y);
      if (dir > 0 && reg == Region::imbibition && !left_facing) {
        left_facing = true;
        out.S_m = y[0];
      }
      if (dir < 0 && reg == Region::drainage && !left_facing) {
        left_facing = true;
        out.S_m = y[0];
      }
      reg = r1;
    }
    out.samples.push_back({t1, y[0], y[1]});

    if (y[0] >= opt.S_cutoff) {
      out.S_m = 1.0;
      return finish(OrbitOutcome::FullSaturationBlowup);
    }

    const int s = sign_of(y[0] - S_T);
    if (s != 0 && side != 0 && s != side) {
      out.sign_changes++;
      if (out.sign_changes > 1) amps.push_back(amp);
      amp = 0.0;
      const int n = opt.spiral_sign_changes;
      if (out.sign_changes >= n && static_cast<int>(amps.size()) >= n - 1) {
        bool decaying = true;
        for (std::size_t k = amps.size() - (n - 2); k < amps.size(); ++k) {
          if (!(amps[k] < opt.spiral_ratio * amps[k - 1])) decaying = false;
        }
        if (decaying) return finish(OrbitOutcome::InfiniteSpiral);
      }
    }
    if (s != 0) side = s;
    amp = std::max(amp, std::abs(y[0] - S_T));

    if (std::abs(y[0] - S_T) < opt.converge_S) {
      const double di = std::abs(y[1] - pi_T), dd = std::abs(y[1] - pd_T);
      if (std::min(di, dd) < opt.converge_p) {
        const Branch terminal = di <= dd ? Branch::imbibition : Branch::drainage;
        if (!out.S_m) out.S_m = S_T;
        out.p_T = terminal == Branch::imbibition ? pi_T : pd_T;
        if (terminal == Branch::imbibition) {
          return finish(out.sign_changes == 0 ? OrbitOutcome::MonotoneToImbibition
                                              : OrbitOutcome::FiniteTurnsToImbibition);
        }
        if (facing == Branch::drainage && out.sign_changes == 0) {
          return finish(OrbitOutcome::DrainageConnection);
        }
        return finish(OrbitOutcome::FiniteTurnsToDrainage);
      }
    }
    if (t1 > opt.xi_max) break;
  }
  return finish(OrbitOutcome::Inconclusive);
}

double BranchSystem::G(double S) const {
  const auto v = model->flux(branch, S);
  return (v.F - F0 - c * (S - S0)) / v.h;
}

double BranchSystem::dG(double S) const {
  const auto v = model->flux(branch, S);
  const auto d = model->dflux(branch, S);
  return (d.F - c) / v.h - (v.F - F0 - c * (S - S0)) * d.h / (v.h * v.h);
}

WCurve shoot_w(const BranchSystem& sys, double tau, double S_T, double S_stop, bool record,
               double t_max) {
  const Model& m = *sys.model;
  const int dir = sign_of(S_T - sys.S0);
  if (dir == 0) throw std::invalid_argument("shooting needs S_T != S_B");
  const double ctau = sys.c * tau;

  Rhs2 rhs = [&](const State2& y, State2& dy, double) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      dy = {kInfinity, kInfinity};
      return;
    }
    const double S = std::clamp(y[0], 1e-12, 1.0 - 1e-12);
    dy[0] = y[1];
    dy[1] = y[1] * m.dpc(sys.branch, S) - ctau * sys.G(S);
  };

  State2 y0{sys.S0, 0.0};
  if (sys.singular_start) {
    const double a = m.dpc(sys.branch, sys.S0);
    const double g = sys.dG(sys.S0);
    const double disc = a * a - 4.0 * ctau * g;
    if (disc < 0.0) throw NumericalError("no real start slope for w");
    const double kappa = 0.5 * (a + std::sqrt(disc));
    const double eps = 1e-8;
    y0 = {sys.S0 + dir * eps, dir * kappa * eps};
  }

  WCurve out;
  auto push = [&](const State2& y) {
    if (!record) return;
    out.S.push_back(y[0]);
    out.w.push_back(m.pc(sys.branch, std::clamp(y[0], 1e-14, 1.0)) - y[1]);
  };
  push(y0);

  DenseDopri ode(rhs, {1e-9, 1e-11, 0.0});
  ode.initialize(y0, 0.0, 1e-6);
  for (long step = 0; step < 5'000'000; ++step) {
    auto [t0, t1] = ode.step();
    const State2 ya = ode.previous_state();
    const State2& y = ode.state();
    if (dir * ya[1] > 0.0 && dir * y[1] <= 0.0) {
      const double tc = ode.locate([](double, const State2& s) { return s[1]; }, t0, t1);
      const State2 yc = ode.state_at(tc);
      push(yc);
      out.S_m = yc[0];
      return out;
    }
    if (dir * (y[0] - S_stop) >= 0.0) {
      const double tc =
          ode.locate([&](double, const State2& s) { return s[0] - S_stop; }, t0, t1);
      push(ode.state_at(tc));
      out.stopped = true;
      out.S_m = S_stop;
      out.blowup = dir > 0 && S_stop >= 1.0 - 1e-6;
      if (out.blowup) out.S_m = 1.0;
      return out;
    }
    push(y);
    if (dir * (S_T - y[0]) >= 0.0 && std::abs(y[0] - S_T) < 1e-11 && std::abs(y[1]) < 1e-11) {
      out.S_m = S_T;
      return out;
    }
    if (t1 > t_max) break;
  }
  out.S_m = S_T;
  return out;
}

TravelingWaveSolver::TravelingWaveSolver(FluxGeometry geo, TwOptions opt)
    : geo_(std::move(geo)), opt_(opt) {}

BranchSystem TravelingWaveSolver::branch_system(double S_T) const {
  return {&geo_.model(), Branch::imbibition, geo_.S_B(), geo_.F_B(), geo_.rh_slope(S_T), true};
}

WCurve TravelingWaveSolver::integrate_w(double tau, double S_T, double S_stop, bool record) const {
  if (!(tau > 0.0)) throw std::invalid_argument("integrate_w needs tau > 0");
  if (!(S_T > geo_.S_B() && S_T <= geo_.S_bar() + 1e-12)) {
    throw std::domain_error("integrate_w needs S_B < S_T <= S_bar");
  }
  return shoot_w(branch_system(S_T), tau, S_T, S_stop, record);
}

double TravelingWaveSolver::S_m(double tau, double S_T) const {
  return integrate_w(tau, S_T, 1.0 - 1e-6, false).S_m;
}

bool TravelingWaveSolver::cached_blow(double tau, double S_T, double S_stop, bool target_only) const {
  const auto key = std::make_tuple(std::llround(tau * 1e12), std::llround(S_T * 1e13),
                                   std::llround(S_stop * 1e13), target_only);
  if (opt_.memoize) {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const bool v = integrate_w(tau, S_T, S_stop, false).stopped;
  if (opt_.memoize) {
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(key, v);
  }
  return v;
}

bool TravelingWaveSolver::exceeds_target(double tau, double S_T) const {
  // Above tau_i the target is a focus and w overshoots it, though by an amount that is
  // exponentially small near tau_i and would escape cross_tol.
  if (geo_.dG(S_T, S_T) * geo_.rh_slope(S_T) > 0.0 && tau > critical_taus(S_T).tau_i) return true;
  return cached_blow(tau, S_T, S_T + opt_.cross_tol, true);
}

bool TravelingWaveSolver::blows_past_beta(double tau, double S_T) const {
  return cached_blow(tau, S_T, geo_.beta(std::max(S_T, geo_.S_tilde())), false);
}

CriticalTaus TravelingWaveSolver::critical_taus(double S_T) const {
  const double c = geo_.rh_slope(S_T);
  const double g = geo_.dG(S_T, S_T);
  if (!(c * g > 0.0)) throw NumericalError("critical tau: nonpositive c G'(S_T)");
  const double ai = model().dpc(Branch::imbibition, S_T);
  const double ad = model().dpc(Branch::drainage, S_T);
  return {ai * ai / (4.0 * c * g), ad * ad / (4.0 * c * g)};
}

double TravelingWaveSolver::tau_bar_m(double S_T) const {
  const double S_B = geo_.S_B(), S_bar = geo_.S_bar();
  double P = kInfinity, m0 = -kInfinity;
  constexpr int n = 2000;
  for (int k = 1; k < n; ++k) {
    const double S = S_B + (S_bar - S_B) * k / n;
    P = std::min(P, -model().dpc(Branch::imbibition, S));
  }
  for (int k = 0; k <= n; ++k) {
    const double S = S_B + (S_T - S_B) * k / n;
    m0 = std::max(m0, geo_.dG(S, S_T));
  }
  return P * P / (4.0 * geo_.rh_slope(S_T) * m0);
}

namespace {

template <class Pred>
double bisect_tau(Pred&& above, double lo, double rel_tol, const char* what) {
  if (above(lo)) {
    for (int k = 0; k < 60 && above(lo); ++k) lo *= 0.5;
    if (above(lo)) throw NumericalError(std::string(what) + ": no lower bracket");
  }
  double hi = 2.0 * lo;
  const double cap = lo * std::ldexp(1.0, 20);
  while (!above(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) throw NumericalError(std::string(what) + ": bracket growth cap exceeded");
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double TravelingWaveSolver::tau_m(double S_T) const {
  return bisect_tau([&](double t) { return exceeds_target(t, S_T); }, tau_bar_m(S_T),
                    opt_.tau_rel_tol, "tau_m");
}

double TravelingWaveSolver::tau_c(double S_T) const {
  const auto star = geo_.star_pair();
  if (S_T <= star.S_star) throw std::domain_error("tau_c exists only for S_T > S_*");
  if (S_T > geo_.S_bar() + 1e-12) throw std::domain_error("tau_c needs S_T <= S_bar");
  return bisect_tau([&](double t) { return blows_past_beta(t, S_T); }, tau_bar_m(S_T),
                    opt_.tau_rel_tol, "tau_c");
}

double TravelingWaveSolver::tau_bar() const {
  std::call_once(tau_bar_once_, [this] { tau_bar_ = tau_m(geo_.S_bar()); });
  return tau_bar_;
}

double TravelingWaveSolver::S_check(double tau) const {
  if (tau <= tau_bar()) return geo_.S_bar();
  const auto star = geo_.star_pair();
  return bisect([&](double S) { return blows_past_beta(tau, S) ? 1.0 : -1.0; },
                {star.S_star, geo_.S_bar()}, opt_.S_tol);
}

double TravelingWaveSolver::S_hat(double tau) const { return geo_.beta(S_check(tau)); }

BifurcationCurves TravelingWaveSolver::bifurcation_curves(std::span<const double> taus,
                                                          bool parallel) const {
  BifurcationCurves out;
  out.tau_bar = tau_bar();
  geo_.star_pair();
  out.tau.assign(taus.begin(), taus.end());
  out.S_check.resize(taus.size());
  out.S_hat.resize(taus.size());
  if (parallel) {
    std::vector<std::future<double>> jobs;
    for (double t : taus) jobs.push_back(std::async(std::launch::async, [this, t] { return S_check(t); }));
    for (std::size_t k = 0; k < jobs.size(); ++k) out.S_check[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < taus.size(); ++k) out.S_check[k] = S_check(taus[k]);
  }
  for (std::size_t k = 0; k < taus.size(); ++k) out.S_hat[k] = geo_.beta(out.S_check[k]);
  return out;
}

SolutionSet TravelingWaveSolver::classify_pair(double S_T, double tau) const {
  const double S_bar = geo_.S_bar();
  if (S_T <= geo_.S_B()) return SolutionSet::OutOfScope;
  const auto star = geo_.star_pair();
  if (S_T <= S_bar) {
    if (S_T <= star.S_star) return SolutionSet::A;
    return blows_past_beta(tau, S_T) && S_T < S_bar ? SolutionSet::B : SolutionSet::A;
  }
  if (S_T >= star.S_upper_star) return SolutionSet::OutOfScope;
  return blows_past_beta(tau, geo_.beta_inverse(S_T)) ? SolutionSet::B : SolutionSet::C;
}

Orbit TravelingWaveSolver::integrate_orbit(double tau, double S_T) const {
  return connect(model(), geo_.S_B(), geo_.p_B(), geo_.F_B(), S_T, geo_.rh_slope(S_T), tau,
                 opt_.orbit);
}

Orbit TravelingWaveSolver::drainage_orbit(double tau, double S_T) const {
  const double Sh = S_hat(tau);
  if (!(S_T < Sh)) throw std::domain_error("drainage orbit needs S_T below the plateau");
  const double Fh = geo_.F(Sh);
  const double c_d = (Fh - geo_.F(S_T)) / (Sh - S_T);
  return connect(model(), Sh, model().pc(Branch::drainage, Sh), Fh, S_T, c_d, tau, opt_.orbit);
}

// Scenario B

namespace {

double base_flux(const Model& m, BaseState b) { return m.flux(b.S_B, b.p_B).F; }

}  // namespace

ScenarioBCase scenario_b_case(const ScenarioBProblem& pb) {
  const Model& m = pb.model;
  const double F_B = base_flux(m, pb.base);
  const auto tp = tangent_saturations_B(m, pb.base);
  if (pb.S_T > pb.base.S_B) {
    if (m.flux(Branch::imbibition, pb.S_T).F < F_B) return ScenarioBCase::Frozen;
    if (pb.S_T > tp.S_bar_i) return ScenarioBCase::Rarefaction;
    if (pb.tau > tau_star(m, pb.base, pb.S_T, Branch::imbibition)) {
      const auto S_P = plateau_saturation(m, pb.base, pb.S_T);
      if (S_P && *S_P <= tp.S_bar_i) return ScenarioBCase::Plateau;
    }
    return ScenarioBCase::Imbibition;
  }
  if (pb.S_T < pb.base.S_B) {
    if (m.flux(Branch::drainage, pb.S_T).F > F_B) return ScenarioBCase::Frozen;
    if (pb.S_T < tp.S_bar_d) return ScenarioBCase::Rarefaction;
    return ScenarioBCase::Drainage;
  }
  throw std::invalid_argument("Scenario B needs S_T != S_B");
}

double frozen_pressure(const Model& m, BaseState base, double S_T) {
  const double F_B = base_flux(m, base);
  const double lo = m.pc(Branch::imbibition, S_T), hi = m.pc(Branch::drainage, S_T);
  auto fn = [&](double p) { return m.flux(S_T, p).F - F_B; };
  if ((fn(lo) < 0.0) == (fn(hi) < 0.0)) {
    throw NumericalError("no frozen state: F(S_T, p) misses F_B on the scanning interval");
  }
  return bisect(fn, {lo, hi}, 1e-12);
}

double tau_star(const Model& m, BaseState base, double S_T, Branch b, double rel_tol) {
  const double F_B = base_flux(m, base);
  const double F_T = m.flux(b, S_T).F;
  if (b == Branch::imbibition && F_T < F_B) return kInfinity;
  if (b == Branch::drainage && F_T > F_B) return kInfinity;
  const double c = (F_T - F_B) / (S_T - base.S_B);
  const bool singular = std::abs(m.flux(b, base.S_B).F - F_B) <= 1e-12;
  const BranchSystem sys{&m, b, base.S_B, F_B, c, singular};
  const int dir = S_T > base.S_B ? 1 : -1;
  auto above = [&](double tau) {
    return shoot_w(sys, tau, S_T, S_T + dir * 1e-9, false).stopped;
  };
  double lo = 1e-3;
  for (int k = 0; k < 40 && above(lo); ++k) lo *= 0.5;
  if (above(lo)) return 0.0;
  double hi = 2.0 * lo;
  for (int k = 0; !above(hi); ++k) {
    if (k > 40) return kInfinity;
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double scenario_b_tau_bound(const Model& m, BaseState base, Branch side, int samples) {
  const auto tp = tangent_saturations_B(m, base);
  const double end = side == Branch::imbibition ? tp.S_bar_i : tp.S_bar_d;
  double bound = kInfinity;
  if (end == base.S_B) return bound;
  for (int k = 1; k <= samples; ++k) {
    const double S = base.S_B + (end - base.S_B) * k / samples;
    bound = std::min(bound, tau_star(m, base, S, side, 1e-3));
  }
  return bound;
}

Orbit scenario_b_orbit(const ScenarioBProblem& pb, const OrbitOptions& opt) {
  const Model& m = pb.model;
  const auto& base = pb.base;
  const double F_B = base_flux(m, base);
  switch (scenario_b_case(pb)) {
    case ScenarioBCase::Frozen: {
      Orbit o;
      o.outcome = OrbitOutcome::Frozen;
      o.p_T = frozen_pressure(m, base, pb.S_T);
      o.samples = {{0.0, base.S_B, base.p_B}, {0.0, pb.S_T, *o.p_T}};
      return o;
    }
    case ScenarioBCase::Imbibition: {
      const double c = (m.flux(Branch::imbibition, pb.S_T).F - F_B) / (pb.S_T - base.S_B);
      return connect(m, base.S_B, base.p_B, F_B, pb.S_T, c, pb.tau, opt);
    }
    case ScenarioBCase::Drainage: {
      const double c = (m.flux(Branch::drainage, pb.S_T).F - F_B) / (pb.S_T - base.S_B);
      return connect(m, base.S_B, base.p_B, F_B, pb.S_T, c, pb.tau, opt);
    }
    case ScenarioBCase::Plateau: {
      const double S_P = *plateau_saturation(m, base, pb.S_T);
      const double F_P = m.flux(Branch::imbibition, S_P).F;
      const double c = (F_P - F_B) / (S_P - base.S_B);
      Orbit first = connect(m, base.S_B, base.p_B, F_B, S_P, c, pb.tau, opt);
      Orbit second =
          connect(m, S_P, m.pc(Branch::imbibition, S_P), F_P, pb.S_T, c, pb.tau, opt);
      const double shift = first.samples.back().xi - second.samples.front().xi;
      for (auto s : second.samples) {
        s.xi += shift;
        first.samples.push_back(s);
      }
      first.outcome = second.outcome;
      first.p_T = second.p_T;
      first.S_m = S_P;
      return first;
    }
    case ScenarioBCase::Rarefaction:
      break;
  }
  throw NumericalError("no traveling wave for this data: S_T lies beyond the tangent point");
}

}  // namespace twophase
