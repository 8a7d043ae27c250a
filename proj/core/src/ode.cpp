#include "twophase/ode.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>

namespace twophase {

namespace odeint = boost::numeric::odeint;

struct DenseDopri::Impl {
  using Stepper = decltype(odeint::make_dense_output(1.0, 1.0, 1.0, odeint::runge_kutta_dopri5<State2>()));

  Impl(Rhs2 f, OdeTolerances tol)
      : rhs(std::move(f)),
        stepper(odeint::make_dense_output(tol.atol, tol.rtol, tol.max_dt,
                                          odeint::runge_kutta_dopri5<State2>())) {}

  Rhs2 rhs;
  Stepper stepper;
  State2 prev{};
  double t_prev = 0.0;
};

DenseDopri::DenseDopri(Rhs2 rhs, OdeTolerances tol)
    : impl_(std::make_unique<Impl>(std::move(rhs), tol)) {}

DenseDopri::~DenseDopri() = default;
DenseDopri::DenseDopri(DenseDopri&&) noexcept = default;
DenseDopri& DenseDopri::operator=(DenseDopri&&) noexcept = default;

void DenseDopri::initialize(const State2& y0, double t0, double dt0) {
  impl_->stepper.initialize(y0, t0, dt0);
  impl_->prev = y0;
  impl_->t_prev = t0;
}

std::pair<double, double> DenseDopri::step() {
  impl_->prev = impl_->stepper.current_state();
  impl_->t_prev = impl_->stepper.current_time();
  return impl_->stepper.do_step(std::ref(impl_->rhs));
}

State2 DenseDopri::state_at(double t) const {
  State2 y{};
  impl_->stepper.calc_state(t, y);
  return y;
}

const State2& DenseDopri::state() const { return impl_->stepper.current_state(); }
double DenseDopri::time() const { return impl_->stepper.current_time(); }
double DenseDopri::previous_time() const { return impl_->t_prev; }
const State2& DenseDopri::previous_state() const { return impl_->prev; }

double DenseDopri::locate(const EventFn& g, double ta, double tb) const {
  double ga = g(ta, state_at(ta));
  for (int k = 0; k < 100 && std::abs(tb - ta) > 1e-14 * (1.0 + std::abs(tb)); ++k) {
    const double tm = 0.5 * (ta + tb);
    const double gm = g(tm, state_at(tm));
    if ((gm < 0.0) == (ga < 0.0) && gm != 0.0) {
      ta = tm;
      ga = gm;
    } else {
      tb = tm;
    }
  }
  return tb;
}

}  // namespace twophase
