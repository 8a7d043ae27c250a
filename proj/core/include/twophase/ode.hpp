#pragma once

#include <array>
#include <functional>
#include <memory>
#include <utility>

namespace twophase {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<void(const State2&, State2&, double)>;
using EventFn = std::function<double(double, const State2&)>;

struct OdeTolerances {
  double rtol = 1e-9;
  double atol = 1e-11;
  double max_dt = 0.0;  // 0 means unbounded
};

// Adaptive Dormand-Prince 5(4) with dense output.
class DenseDopri {
 public:
  DenseDopri(Rhs2 rhs, OdeTolerances tol = {});
  ~DenseDopri();
  DenseDopri(DenseDopri&&) noexcept;
  DenseDopri& operator=(DenseDopri&&) noexcept;

  void initialize(const State2& y0, double t0, double dt0);
  std::pair<double, double> step();
  State2 state_at(double t) const;
  const State2& state() const;
  double time() const;
  double previous_time() const;
  const State2& previous_state() const;

  // Root of g(t, y(t)) inside [ta, tb] by bisection on the dense interpolant.
  double locate(const EventFn& g, double ta, double tb) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace twophase
