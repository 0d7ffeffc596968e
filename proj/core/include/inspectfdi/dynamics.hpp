#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "inspectfdi/errors.hpp"

namespace inspectfdi {

/// Observer state relative to the target, LVLH frame.
struct RelativeState {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  Eigen::Vector3d velocity{Eigen::Vector3d::Zero()};
};

struct OrbitParams {
  double mean_motion = 0.0;  // n, rad/s, > 0
};

/// Right-hand side of the Hill-Clohessy-Wiltshire equations:
///   x'' = 3 n^2 x + 2 n y' + ax
///   y'' = -2 n x' + ay
///   z'' = -n^2 z + az
/// Returned as a (velocity, acceleration) pair packed in RelativeState.
RelativeState hcw_derivative(const RelativeState& state, const Eigen::Vector3d& accel,
                             const OrbitParams& params);

namespace detail {
inline bool finite_state(double x) { return std::isfinite(x); }
template <typename Derived>
bool finite_state(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}
}  // namespace detail

/// Classical fixed-step RK4. `f(state, t)` returns the derivative; the
/// state type needs addition and scalar multiplication (double or any
/// fixed-size Eigen vector). Throws PropagationError on non-finite output.
template <typename State, typename Deriv>
State rk4_step(const State& x, double t, double dt, Deriv&& f) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rk4_step: dt must be > 0");
  }
  const double h = 0.5 * dt;
  const State k1 = f(x, t);
  const State k2 = f(State(x + h * k1), t + h);
  const State k3 = f(State(x + h * k2), t + h);
  const State k4 = f(State(x + dt * k3), t + dt);
  State out = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  if (!detail::finite_state(out)) {
    throw PropagationError("rk4_step: non-finite state");
  }
  return out;
}

/// One RK4 step of the HCW dynamics under constant acceleration.
RelativeState hcw_step(const RelativeState& state, const Eigen::Vector3d& accel, double t,
                       double dt, const OrbitParams& params);

/// 1-DOF translation used by the planar analytic scenario.
inline double step_1dof(double x, double dx) { return x + dx; }

/// Bounded (drift-free) relative orbit parameterization:
///   x = rho sin(n t + alpha), y = y0 + 2 rho cos(n t + alpha),
///   z = rho_z sin(n t + gamma)
/// The implied initial condition satisfies the energy-matching constraint
/// ydot0 = -2 n x0.
struct ProParams {
  double radial_amplitude = 0.0;    // rho, m
  double phase = 0.0;               // alpha, rad
  double along_track_offset = 0.0;  // y0, m
  double cross_amplitude = 0.0;     // rho_z, m
  double cross_phase = 0.0;         // gamma, rad
};

RelativeState pro_initial_state(const ProParams& pro, const OrbitParams& params);

/// Closed-form PRO state at time t (test oracle and initialization helper).
RelativeState pro_state_at(const ProParams& pro, const OrbitParams& params, double t);

}  // namespace inspectfdi
