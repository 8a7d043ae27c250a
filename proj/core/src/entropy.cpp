#include "twophase/entropy.hpp"

#include "twophase/flux_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace twophase {

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::constant: return "constant";
    case SegmentKind::shock: return "shock";
    case SegmentKind::rarefaction: return "rarefaction";
  }
  return "?";
}

std::size_t PiecewiseSolution::shock_count() const {
  return std::count_if(segments.begin(), segments.end(),
                       [](const Segment& s) { return s.kind == SegmentKind::shock; });
}

std::size_t PiecewiseSolution::nonclassical_count() const {
  return std::count_if(segments.begin(), segments.end(), [](const Segment& s) {
    return s.kind == SegmentKind::shock && !s.classical;
  });
}

bool oleinik_admissible(const Model& model, Branch b, double uL, double FL, double uR, double FR,
                        double speed, int samples) {
  const double tol = 1e-9 * (1.0 + std::abs(speed));
  for (int k = 1; k < samples; ++k) {
    const double u = uL + (uR - uL) * k / samples;
    const double F = model.flux(b, u).F;
    const double from_left = (F - FL) / (u - uL);
    const double from_right = (F - FR) / (u - uR);
    if (from_left < speed - tol || from_right > speed + tol) return false;
  }
  return true;
}

namespace {

constexpr double kMerge = 1e-8;

class Builder {
 public:
  Builder(const Model& m, double S_left) : m_(m) {
    sol_.model = m;
    sol_.S_left = S_left;
    state_ = S_left;
  }

  void shock(double to, double FL, double FR, double speed, Branch b) {
    Segment s;
    s.kind = SegmentKind::shock;
    s.left_S = state_;
    s.right_S = to;
    s.speed_lo = s.speed_hi = speed;
    s.left_F = FL;
    s.right_F = FR;
    s.branch = b;
    s.classical = oleinik_admissible(m_, b, state_, FL, to, FR, speed);
    waves_.push_back(s);
    state_ = to;
  }

  void rarefaction(double to, Branch b) {
    Segment s;
    s.kind = SegmentKind::rarefaction;
    s.left_S = state_;
    s.right_S = to;
    s.speed_lo = m_.dflux(b, state_).F;
    s.speed_hi = m_.dflux(b, to).F;
    s.branch = b;
    waves_.push_back(s);
    state_ = to;
  }

  PiecewiseSolution finish() {
    sol_.S_right = state_;
    double S = sol_.S_left;
    double lo = -kInfinity;
    for (const auto& w : waves_) {
      if (lo == -kInfinity || w.speed_lo - lo > kMerge * (1.0 + std::abs(lo))) {
        sol_.segments.push_back(constant(S, lo, w.speed_lo));
      } else {
        // adjacent waves; the gap is root-finding noise from the tangent point
        sol_.segments.back().speed_hi = w.speed_lo;
      }
      sol_.segments.push_back(w);
      S = w.right_S;
      lo = w.speed_hi;
    }
    sol_.segments.push_back(constant(S, lo, kInfinity));
    return sol_;
  }

 private:
  static Segment constant(double S, double lo, double hi) {
    Segment s;
    s.left_S = s.right_S = S;
    s.speed_lo = lo;
    s.speed_hi = hi;
    return s;
  }

  const Model& m_;
  PiecewiseSolution sol_;
  std::vector<Segment> waves_;
  double state_;
};

}  // namespace

PiecewiseSolution solve_A(const RiemannProblem& pb) {
  TravelingWaveSolver tw(FluxGeometry(pb.model, pb.S_B));
  return solve_A(pb, tw);
}

PiecewiseSolution solve_A(const RiemannProblem& pb, const TravelingWaveSolver& tw) {
  if (pb.S_T <= pb.S_B) {
    throw std::invalid_argument("Scenario A Riemann data needs S_B < S_T; use Scenario B for drainage data");
  }
  const auto& geo = tw.geometry();
  const Model& m = pb.model;
  const Branch b = Branch::imbibition;
  const double F_B = geo.F_B();
  const double F_T = geo.F(pb.S_T);
  Builder out(m, pb.S_T);
  switch (tw.classify_pair(pb.S_T, pb.tau)) {
    case SolutionSet::A:
      out.shock(pb.S_B, F_T, F_B, (F_T - F_B) / (pb.S_T - pb.S_B), b);
      break;
    case SolutionSet::B: {
      const double Sh = tw.S_hat(pb.tau);
      const double Fh = geo.F(Sh);
      out.shock(Sh, F_T, Fh, (Fh - F_T) / (Sh - pb.S_T), b);
      out.shock(pb.S_B, Fh, F_B, (Fh - F_B) / (Sh - pb.S_B), b);
      break;
    }
    case SolutionSet::C: {
      const double Sh = tw.S_hat(pb.tau);
      const double Fh = geo.F(Sh);
      out.rarefaction(Sh, b);
      out.shock(pb.S_B, Fh, F_B, (Fh - F_B) / (Sh - pb.S_B), b);
      break;
    }
    case SolutionSet::OutOfScope:
      throw std::domain_error("(S_T, tau) lies outside the sets A, B and C");
  }
  return out.finish();
}

PiecewiseSolution solve_B(const RiemannProblem& pb, bool enforce_tau_bound) {
  const Model& m = pb.model;
  const BaseState base{pb.S_B, pb.p_B};
  if (enforce_tau_bound) {
    const Branch side = pb.S_T > pb.S_B ? Branch::imbibition : Branch::drainage;
    const double bound = scenario_b_tau_bound(m, base, side);
    if (!(pb.tau < bound)) {
      throw std::domain_error("tau = " + std::to_string(pb.tau) + " is not below the bound " +
                              std::to_string(bound) +
                              "; the hyperbolic limit does not apply, integrate the traveling "
                              "wave system instead");
    }
  }
  const double F_B = m.flux(pb.S_B, pb.p_B).F;
  const auto tp = tangent_saturations_B(m, base);
  Builder out(m, pb.S_T);
  if (pb.S_T > pb.S_B) {
    const Branch b = Branch::imbibition;
    const double F_T = m.flux(b, pb.S_T).F;
    if (F_T < F_B) {
      out.shock(pb.S_B, F_B, F_B, 0.0, b);
    } else if (pb.S_T <= tp.S_bar_i) {
      out.shock(pb.S_B, F_T, F_B, (F_T - F_B) / (pb.S_T - pb.S_B), b);
    } else {
      const double Fi = m.flux(b, tp.S_bar_i).F;
      out.rarefaction(tp.S_bar_i, b);
      out.shock(pb.S_B, Fi, F_B, (Fi - F_B) / (tp.S_bar_i - pb.S_B), b);
    }
  } else if (pb.S_T < pb.S_B) {
    const Branch b = Branch::drainage;
    const double F_T = m.flux(b, pb.S_T).F;
    if (F_T > F_B) {
      out.shock(pb.S_B, F_B, F_B, 0.0, b);
    } else if (pb.S_T >= tp.S_bar_d) {
      out.shock(pb.S_B, F_T, F_B, (F_B - F_T) / (pb.S_B - pb.S_T), b);
    } else {
      const double Fd = m.flux(b, tp.S_bar_d).F;
      out.rarefaction(tp.S_bar_d, b);
      out.shock(pb.S_B, Fd, F_B, (F_B - Fd) / (pb.S_B - tp.S_bar_d), b);
    }
  } else {
    throw std::invalid_argument("Riemann data needs S_T != S_B");
  }
  return out.finish();
}

double evaluate(const PiecewiseSolution& sol, double z, double t) {
  if (t < 0.0) throw std::domain_error("evaluate needs t >= 0");
  if (t == 0.0) return z < 0.0 ? sol.S_left : sol.S_right;
  const double zeta = z / t;
  for (const auto& s : sol.segments) {
    if (s.kind == SegmentKind::shock) continue;
    if (zeta > s.speed_hi) continue;
    if (s.kind == SegmentKind::constant) return s.left_S;
    if (zeta < s.speed_lo) return s.left_S;
    const double lo = std::min(s.left_S, s.right_S), hi = std::max(s.left_S, s.right_S);
    return rarefaction_inverse(sol.model, s.branch, zeta, lo, hi);
  }
  return sol.S_right;
}

}  // namespace twophase
