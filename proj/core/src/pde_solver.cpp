#include "twophase/pde_solver.hpp"

#include "twophase/numerics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace twophase {

Grid::Grid(double z_in, double z_out, int N) : z_in_(z_in), z_out_(z_out) {
  if (!(z_in < 0.0 && 0.0 < z_out)) throw std::invalid_argument("grid needs z_in < 0 < z_out");
  if (N < 10) throw std::invalid_argument("grid needs at least 10 cells");
  dz_ = (z_out - z_in) / N;
  centers_.resize(N);
  for (int k = 0; k < N; ++k) centers_[k] = z_in + (k + 0.5) * dz_;
}

Grid Grid::with_spacing(double z_in, double z_out, double dz) {
  if (!(dz > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  return Grid(z_in, z_out, static_cast<int>(std::lround((z_out - z_in) / dz)));
}

PressureScheme parse_pressure_scheme(std::string_view s) {
  if (s == "newton") return PressureScheme::newton;
  if (s == "lscheme") return PressureScheme::lscheme;
  throw std::invalid_argument("unknown pressure scheme '" + std::string(s) + "'");
}

Advection parse_advection(std::string_view s) {
  if (s == "auto") return Advection::automatic;
  if (s == "central") return Advection::central;
  if (s == "upwind") return Advection::upwind;
  throw std::invalid_argument("unknown advection '" + std::string(s) + "'");
}

std::string_view to_string(PressureScheme s) {
  return s == PressureScheme::newton ? "newton" : "lscheme";
}

std::string_view to_string(Advection a) {
  switch (a) {
    case Advection::automatic: return "auto";
    case Advection::central: return "central";
    case Advection::upwind: return "upwind";
  }
  return "?";
}

std::vector<double> initial_condition(const Grid& grid, double S_B, double S_T, double l) {
  if (!(l > 0.0 && l < std::min(-grid.z_in(), grid.z_out()))) {
    throw std::domain_error("smoothing length must lie in (0, min(|z_in|, z_out))");
  }
  std::vector<double> S;
  S.reserve(grid.size());
  for (double z : grid.centers()) {
    if (z < -l) S.push_back(S_T);
    else if (z > l) S.push_back(S_B);
    else S.push_back(0.5 * (S_B + S_T) + (S_T - S_B) / (4.0 * l * l * l) * z * (z * z - 3.0 * l * l));
  }
  return S;
}

double max_flux_speed(const Model& model, int samples) {
  double mx = 0.0;
  for (Branch b : {Branch::imbibition, Branch::drainage}) {
    for (int k = 1; k < samples; ++k) {
      mx = std::max(mx, std::abs(model.dflux(b, static_cast<double>(k) / samples).F));
    }
  }
  return mx;
}

namespace {

// Thomas elimination; sub[0] and sup[n-1] are ignored.
void solve_tridiagonal(std::span<const double> sub, std::vector<double>& diag,
                       std::span<const double> sup, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (diag[k - 1] == 0.0) throw NumericalError("zero pivot in tridiagonal solve");
    const double w = sub[k] / diag[k - 1];
    diag[k] -= w * sup[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] = (rhs[k] - sup[k] * rhs[k + 1]) / diag[k];
}

constexpr int kPlainNewton = 8;

double relax(double pi, double pd, double p) {
  if (p < pi) return pi - p;
  if (p > pd) return pd - p;
  return 0.0;
}

}  // namespace

PdeSolver::PdeSolver(PdeProblem pb, Grid grid, SolverConfig cfg)
    : pb_(std::move(pb)), grid_(std::move(grid)), cfg_(cfg), tau_(pb_.model.tau()) {
  if (!(tau_ > 0.0)) throw std::invalid_argument("the PDE solver needs tau > 0");
  if (!(cfg_.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (cfg_.dt < 0.0 || cfg_.L < 0.0) throw std::invalid_argument("dt and L must be positive");
  dt_ = cfg_.dt > 0.0 ? cfg_.dt
                      : std::min(0.5 * grid_.dz() / max_flux_speed(pb_.model), 0.5 * tau_);
  L_ = cfg_.L > 0.0 ? cfg_.L : 1.0 / tau_;
  const Branch b = cfg_.bc_mode == Scenario::A ? Branch::imbibition : Branch::drainage;
  p_out_ = pb_.model.pc(b, pb_.S_B);
  advection_ = cfg_.advection;
  if (advection_ == Advection::automatic) {
    advection_ = pb_.model.hysteretic_permeability() ? Advection::upwind : Advection::central;
  }
}

GridState PdeSolver::initial_state() const {
  GridState st;
  st.S = initial_condition(grid_, pb_.S_B, pb_.S_T, cfg_.smoothing_l);
  const Branch b = cfg_.bc_mode == Scenario::A ? Branch::imbibition : Branch::drainage;
  st.p.reserve(st.S.size());
  for (double S : st.S) st.p.push_back(pb_.model.pc(b, S));
  return st;
}

int PdeSolver::solve_pressure(std::span<const double> S, std::vector<double>& p) const {
  const Model& m = pb_.model;
  const std::size_t n = S.size();
  const double dz = grid_.dz();
  const double dz2 = dz * dz;
  const bool newton = cfg_.scheme == PressureScheme::newton;
  const bool p_dependent = m.hysteretic_permeability();
  const double wL = advection_ == Advection::central ? 0.5 : 1.0;
  const double wR = 1.0 - wL;

  std::vector<double> pi(n), pd(n), F(n), h(n), Fp(n, 0.0), hf(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    pi[k] = m.pc(Branch::imbibition, S[k]);
    pd[k] = m.pc(Branch::drainage, S[k]);
  }
  auto eval_flux = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = m.flux(S[k], p[k]);
      F[k] = v.F;
      h[k] = v.h;
      if (p_dependent && newton) Fp[k] = m.dF_dp(S[k], p[k]);
    }
    for (std::size_t j = 1; j < n; ++j) hf[j] = 0.5 * (h[j - 1] + h[j]);
    hf[n] = 2.0 * h[n - 1];
  };
  eval_flux();

  std::vector<double> sub(n), diag(n), sup(n), rhs(n);
  // Fills the tridiagonal system for the current p; rhs holds minus the residual. Returns the
  // residual max-norm.
  auto assemble = [&] {
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double Fright = k + 1 < n ? wL * F[k] + wR * F[k + 1] : F[k];
      const double Fleft = k > 0 ? wL * F[k - 1] + wR * F[k] : F[k];
      const double p_right = k + 1 < n ? p[k + 1] : p_out_;
      const double p_left = k > 0 ? p[k - 1] : p[k];
      const double Ap = (hf[k + 1] * (p[k] - p_right) + hf[k] * (p[k] - p_left)) / dz2;
      const double R = relax(pi[k], pd[k], p[k]);
      rhs[k] = -(Ap - (Fright - Fleft) / dz - R / tau_);
      norm = std::max(norm, std::abs(rhs[k]));

      double Lk = L_;
      if (newton) Lk = R != 0.0 ? 1.0 / tau_ : 0.0;
      diag[k] = (hf[k] + hf[k + 1]) / dz2 + Lk;
      sub[k] = k > 0 ? -hf[k] / dz2 : 0.0;
      sup[k] = k + 1 < n ? -hf[k + 1] / dz2 : 0.0;
      if (newton && p_dependent) {
        // d(divF_k)/dp from the right face minus the left face
        diag[k] -= ((k + 1 < n ? wL : 1.0) - (k > 0 ? wR : 1.0)) * Fp[k] / dz;
        if (k + 1 < n) sup[k] -= wR * Fp[k + 1] / dz;
        if (k > 0) sub[k] += wL * Fp[k - 1] / dz;
      }
    }
    return norm;
  };

  double res = assemble();
  std::vector<double> base(n), step(n);
  for (int it = 1; it <= cfg_.max_iter; ++it) {
    solve_tridiagonal(sub, diag, sup, rhs);
    double upd = 0.0;
    for (std::size_t k = 0; k < n; ++k) upd = std::max(upd, std::abs(rhs[k]));
    if (!std::isfinite(upd)) throw NumericalError("pressure iteration produced a non-finite value");
    if (upd < cfg_.tol || !newton || it <= kPlainNewton) {
      for (std::size_t k = 0; k < n; ++k) p[k] += rhs[k];
      if (upd < cfg_.tol) return it;
      if (p_dependent) eval_flux();
      res = assemble();
      continue;
    }
    // Semismooth Newton can cycle between active sets; once it is slow to settle, backtrack on
    // the residual norm.
    base = p;
    step = rhs;
    double lambda = 1.0;
    for (int ls = 0;; ++ls) {
      for (std::size_t k = 0; k < n; ++k) p[k] = base[k] + lambda * step[k];
      if (p_dependent) eval_flux();
      const double trial = assemble();
      if (trial < (1.0 - 1e-4 * lambda) * res || ls == 10) {
        res = trial;
        break;
      }
      lambda *= 0.5;
    }
  }
  std::ostringstream msg;
  msg << "pressure iteration did not converge in " << cfg_.max_iter << " iterations (scheme "
      << to_string(cfg_.scheme) << ", L = " << L_ << ")";
  throw NumericalError(msg.str());
}

double PdeSolver::boundary_flux_difference(std::span<const double> S,
                                           std::span<const double> p) const {
  const Model& m = pb_.model;
  const std::size_t n = S.size();
  const double q_in = m.flux(S[0], p[0]).F;
  const auto out = m.flux(S[n - 1], p[n - 1]);
  const double q_out = out.F + out.h * (p_out_ - p[n - 1]) / (0.5 * grid_.dz());
  return q_in - q_out;
}

StepStats PdeSolver::step(GridState& st, double dt) const {
  StepStats stats;
  stats.iterations = solve_pressure(st.S, st.p);
  const Model& m = pb_.model;
  const std::size_t n = st.S.size();
  std::vector<double> rate(n);
  for (std::size_t k = 0; k < n; ++k) rate[k] = m.relaxation(st.S[k], st.p[k]) / tau_;

  std::vector<double> S_new(n);
  for (;;) {
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      S_new[k] = st.S[k] + dt * rate[k];
      ok = S_new[k] > 0.0 && S_new[k] < 1.0;
    }
    if (ok) break;
    if (++stats.halvings > cfg_.max_halvings) {
      std::ostringstream msg;
      msg << "saturation left (0,1) at t = " << st.t << " after " << cfg_.max_halvings
          << " step halvings";
      throw NumericalError(msg.str());
    }
    dt *= 0.5;
  }

  double dmass = 0.0;
  for (std::size_t k = 0; k < n; ++k) dmass += (S_new[k] - st.S[k]) * grid_.dz();
  stats.mass_residual = std::abs(dmass - dt * boundary_flux_difference(st.S, st.p));
  stats.dt = dt;
  st.S = std::move(S_new);
  st.t += dt;
  return stats;
}

RunResult PdeSolver::run(std::span<const double> checkpoint_times, const Observer& obs) const {
  return run_from(initial_state(), checkpoint_times, obs);
}

RunResult PdeSolver::run_from(GridState st, std::span<const double> checkpoint_times,
                              const Observer& obs) const {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> marks;
  for (double t : checkpoint_times) {
    if (t >= st.t && t <= cfg_.t_end) marks.push_back(t);
  }
  std::sort(marks.begin(), marks.end());

  RunResult res;
  auto next = marks.begin();
  auto record = [&] {
    while (next != marks.end() && *next <= st.t) {
      res.checkpoints.push_back(st);
      ++next;
    }
  };
  record();
  while (st.t < cfg_.t_end) {
    const double target = next != marks.end() ? *next : cfg_.t_end;
    double dt = std::min(dt_, target - st.t);
    const bool lands = dt >= target - st.t;
    const auto stats = step(st, dt);
    if (lands && stats.halvings == 0) st.t = target;
    if (st.t > cfg_.t_end - 1e-12 * std::max(1.0, cfg_.t_end)) st.t = cfg_.t_end;
    auto& s = res.summary;
    ++s.steps;
    s.total_iterations += stats.iterations;
    s.max_iterations = std::max(s.max_iterations, stats.iterations);
    s.rejected += stats.halvings;
    s.max_mass_residual = std::max(s.max_mass_residual, stats.mass_residual);
    if (obs) obs(st, stats);
    record();
  }
  res.final_state = std::move(st);
  res.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace twophase
