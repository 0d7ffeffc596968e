#include "inspectfdi/fault.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace inspectfdi {

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::actuator_state:
      return "actuator_state";
    case FaultKind::actuator_pointing:
      return "actuator_pointing";
    case FaultKind::sensor_degradation:
      return "sensor_degradation";
    case FaultKind::sensor_blackout:
      return "sensor_blackout";
  }
  return "unknown";
}

std::optional<FaultKind> fault_kind_from_string(std::string_view name) {
  if (name == "actuator_state") return FaultKind::actuator_state;
  if (name == "actuator_pointing") return FaultKind::actuator_pointing;
  if (name == "sensor_degradation") return FaultKind::sensor_degradation;
  if (name == "sensor_blackout") return FaultKind::sensor_blackout;
  return std::nullopt;
}

bool fault_active(const FaultSpec& spec, double t) { return t >= spec.start_time; }

void validate(const FaultSpec& spec) {
  if (!(spec.start_time >= 0.0)) {
    throw std::invalid_argument("fault '" + spec.id + "': start_time must be >= 0");
  }
  switch (spec.kind) {
    case FaultKind::actuator_state:
      if (spec.position_noise_std < 0.0 || spec.velocity_noise_std < 0.0 ||
          spec.step_noise_std < 0.0) {
        throw std::invalid_argument("fault '" + spec.id + "': noise std must be >= 0");
      }
      break;
    case FaultKind::actuator_pointing:
    case FaultKind::sensor_blackout:
      if (!(spec.misalignment_angle > 0.0) || spec.misalignment_angle > std::numbers::pi) {
        throw std::invalid_argument("fault '" + spec.id +
                                    "': misalignment angle must be in (0, 180] degrees");
      }
      break;
    case FaultKind::sensor_degradation:
      if (!(spec.beta > 0.0 && spec.beta < 1.0)) {
        throw std::invalid_argument("fault '" + spec.id + "': beta must be in (0, 1)");
      }
      break;
  }
}

namespace {

void require_kind(const FaultSpec& spec, FaultKind a,
                  std::optional<FaultKind> b = std::nullopt) {
  if (spec.kind != a && (!b || spec.kind != *b)) {
    throw std::invalid_argument(std::string("fault kind mismatch: got ") +
                                to_string(spec.kind));
  }
}

void require_active(const FaultSpec& spec, double t) {
  if (!fault_active(spec, t)) {
    throw std::invalid_argument("fault applied before its start time");
  }
}

/// Deterministic unit vector perpendicular to v: cross with the coordinate
/// axis least aligned with v.
Eigen::Vector3d fixed_perpendicular(const Eigen::Vector3d& v) {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  double ax = std::abs(v.x()), ay = std::abs(v.y()), az = std::abs(v.z());
  if (ay <= ax && ay <= az) {
    axis = Eigen::Vector3d::UnitY();
  } else if (az <= ax && az <= ay) {
    axis = Eigen::Vector3d::UnitZ();
  }
  return v.cross(axis).normalized();
}

}  // namespace

void inject_actuator_state(RelativeState& state, const FaultSpec& spec, double t,
                           RngStream& rng) {
  require_kind(spec, FaultKind::actuator_state);
  require_active(spec, t);
  for (int i = 0; i < 3; ++i) {
    double dp = spec.position_bias[i];
    if (spec.position_noise_std > 0.0) {
      dp += spec.position_noise_std * rng.gaussian();
    }
    state.position[i] += dp;
  }
  for (int i = 0; i < 3; ++i) {
    double dv = spec.velocity_bias[i];
    if (spec.velocity_noise_std > 0.0) {
      dv += spec.velocity_noise_std * rng.gaussian();
    }
    state.velocity[i] += dv;
  }
}

double inject_actuator_step(double commanded, const FaultSpec& spec, double t,
                            RngStream& rng) {
  require_kind(spec, FaultKind::actuator_state);
  require_active(spec, t);
  double realized = commanded + spec.step_bias;
  if (spec.step_noise_std > 0.0) {
    realized += spec.step_noise_std * rng.gaussian();
  }
  return realized;
}

Eigen::Vector3d inject_pointing_misalignment(const Eigen::Vector3d& pointing,
                                             const FaultSpec& spec) {
  require_kind(spec, FaultKind::actuator_pointing, FaultKind::sensor_blackout);
  if (spec.misalignment_angle == 0.0) {
    return pointing;
  }
  Eigen::Vector3d axis;
  if (spec.misalignment_axis) {
    const double n = spec.misalignment_axis->norm();
    if (!(n > 0.0)) {
      throw std::invalid_argument("fault '" + spec.id + "': zero misalignment axis");
    }
    axis = *spec.misalignment_axis / n;
  } else {
    axis = fixed_perpendicular(pointing);
  }
  // Rodrigues rotation.
  const double c = std::cos(spec.misalignment_angle);
  const double s = std::sin(spec.misalignment_angle);
  Eigen::Vector3d rotated =
      pointing * c + axis.cross(pointing) * s + axis * (axis.dot(pointing)) * (1.0 - c);
  return rotated.normalized();
}

SensorModel inject_sensor_degradation(const SensorModel& sensor, const FaultSpec& spec) {
  require_kind(spec, FaultKind::sensor_degradation);
  // beta = 1 is the identity; a configured fault must satisfy the stricter
  // (0, 1) bound, which validate() enforces at load time.
  if (!(spec.beta > 0.0 && spec.beta <= 1.0)) {
    throw std::invalid_argument("fault '" + spec.id + "': beta must be in (0, 1]");
  }
  SensorModel degraded = sensor;
  degraded.degradation = spec.beta;
  return degraded;
}

}  // namespace inspectfdi
