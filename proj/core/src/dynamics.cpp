#include "inspectfdi/dynamics.hpp"

namespace inspectfdi {

RelativeState hcw_derivative(const RelativeState& state, const Eigen::Vector3d& accel,
                             const OrbitParams& params) {
  const double n = params.mean_motion;
  RelativeState d;
  d.position = state.velocity;
  d.velocity.x() = 3.0 * n * n * state.position.x() + 2.0 * n * state.velocity.y() + accel.x();
  d.velocity.y() = -2.0 * n * state.velocity.x() + accel.y();
  d.velocity.z() = -n * n * state.position.z() + accel.z();
  return d;
}

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 pack(const RelativeState& s) {
  Vec6 v;
  v << s.position, s.velocity;
  return v;
}

RelativeState unpack(const Vec6& v) {
  RelativeState s;
  s.position = v.head<3>();
  s.velocity = v.tail<3>();
  return s;
}

}  // namespace

RelativeState hcw_step(const RelativeState& state, const Eigen::Vector3d& accel, double t,
                       double dt, const OrbitParams& params) {
  auto rhs = [&](const Vec6& v, double) -> Vec6 {
    return pack(hcw_derivative(unpack(v), accel, params));
  };
  return unpack(rk4_step(pack(state), t, dt, rhs));
}

RelativeState pro_state_at(const ProParams& pro, const OrbitParams& params, double t) {
  const double n = params.mean_motion;
  const double a = n * t + pro.phase;
  const double c = n * t + pro.cross_phase;
  RelativeState s;
  s.position.x() = pro.radial_amplitude * std::sin(a);
  s.position.y() = pro.along_track_offset + 2.0 * pro.radial_amplitude * std::cos(a);
  s.position.z() = pro.cross_amplitude * std::sin(c);
  s.velocity.x() = pro.radial_amplitude * n * std::cos(a);
  s.velocity.y() = -2.0 * pro.radial_amplitude * n * std::sin(a);
  s.velocity.z() = pro.cross_amplitude * n * std::cos(c);
  return s;
}

RelativeState pro_initial_state(const ProParams& pro, const OrbitParams& params) {
  return pro_state_at(pro, params, 0.0);
}

}  // namespace inspectfdi
