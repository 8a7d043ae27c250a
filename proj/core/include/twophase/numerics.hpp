#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace twophase {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bracket {
  double lo;
  double hi;
};

// First sub-interval of an n-point uniform grid on [lo, hi] where fn changes sign.
// A grid point where fn is exactly zero is returned as a degenerate bracket.
template <class Fn>
std::optional<Bracket> first_sign_change(Fn&& fn, double lo, double hi, int n = 2000) {
  double x0 = lo;
  double f0 = fn(x0);
  if (f0 == 0.0) return Bracket{x0, x0};
  for (int k = 1; k <= n; ++k) {
    const double x1 = lo + (hi - lo) * k / n;
    const double f1 = fn(x1);
    if (f1 == 0.0) return Bracket{x1, x1};
    if ((f0 < 0.0) != (f1 < 0.0)) return Bracket{x0, x1};
    x0 = x1;
    f0 = f1;
  }
  return std::nullopt;
}

template <class Fn>
double bisect(Fn&& fn, Bracket b, double tol = 1e-10) {
  if (b.lo == b.hi) return b.lo;
  if (b.lo > b.hi) std::swap(b.lo, b.hi);
  auto tol_fn = [tol](double a, double c) { return std::abs(c - a) <= tol; };
  try {
    auto [a, c] = boost::math::tools::bisect(fn, b.lo, b.hi, tol_fn);
    return 0.5 * (a + c);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("bisection failed on [") + std::to_string(b.lo) + ", " +
                         std::to_string(b.hi) + "]: " + e.what());
  }
}

template <class Fn>
double find_first_root(Fn&& fn, double lo, double hi, const char* what, double tol = 1e-10,
                       int n = 2000) {
  auto br = first_sign_change(fn, lo, hi, n);
  if (!br) {
    throw NumericalError(std::string("no sign change for ") + what + " on [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  }
  return bisect(fn, *br, tol);
}

template <class Fn>
double integrate(Fn&& fn, double a, double b, double tol = 1e-11) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(fn, a, b, 12, tol, &err);
}

}  // namespace twophase
