#include "integrator.hpp"

#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "iaf/error.hpp"

namespace iaf::detail {
namespace {

namespace odeint = boost::numeric::odeint;

using State = double;
using Stepper = odeint::runge_kutta_dopri5<State, double, State, double, odeint::vector_space_algebra>;

// Wall on integration length; trajectories this long mean the threshold is
// effectively unreachable and something upstream is wrong.
constexpr double kMaxIntegrationTime = 1e9;
constexpr double kInitialStep = 1e-3;

auto make_stepper(const GenericField& field) {
  return odeint::make_dense_output(field.tolerances.absolute, field.tolerances.relative, Stepper{});
}

void check_finite(double x, double t) {
  if (!std::isfinite(x)) {
    throw IntegrationFailure("non-finite state at t=" + std::to_string(t));
  }
}

}  // namespace

double integrate_flow(const GenericField& field, double drive, double t, double x0) {
  if (t < 0.0) throw DomainError("flow duration must be non-negative");
  if (t == 0.0) return x0;
  auto rhs = [&](const State& x, State& dxdt, double) { dxdt = field.f(x) + drive; };

  auto stepper = make_stepper(field);
  stepper.initialize(x0, 0.0, std::min(kInitialStep, t));
  while (stepper.current_time() < t) {
    stepper.do_step(rhs);
    check_finite(stepper.current_state(), stepper.current_time());
  }
  State x = 0.0;
  stepper.calc_state(t, x);
  check_finite(x, t);
  return x;
}

double integrate_to_level(const GenericField& field, double drive, double x0, double level) {
  if (x0 >= level) return 0.0;
  auto rhs = [&](const State& x, State& dxdt, double) { dxdt = field.f(x) + drive; };

  auto stepper = make_stepper(field);
  stepper.initialize(x0, 0.0, kInitialStep);
  while (stepper.current_state() < level) {
    stepper.do_step(rhs);
    check_finite(stepper.current_state(), stepper.current_time());
    if (stepper.current_time() > kMaxIntegrationTime) {
      throw IntegrationFailure("threshold not reached within integration horizon");
    }
  }

  double lo = stepper.previous_time();
  double hi = stepper.current_time();
  State x = 0.0;
  while (hi - lo > field.tolerances.event_time) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    stepper.calc_state(mid, x);
    if (x < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace iaf::detail
