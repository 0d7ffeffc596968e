#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "inspectfdi/dynamics.hpp"
#include "inspectfdi/geometry.hpp"
#include "inspectfdi/rng.hpp"

namespace inspectfdi {

enum class FaultKind {
  actuator_state,      // bias/noise corrupting realized motion
  actuator_pointing,   // rotational misalignment of the pointing vector
  sensor_degradation,  // inverse-variance scale beta < 1
  sensor_blackout,     // misalignment large enough to empty the visible set
};

const char* to_string(FaultKind kind);
std::optional<FaultKind> fault_kind_from_string(std::string_view name);

/// Seeded fault description. Only the fields matching `kind` are used;
/// validate() enforces the per-kind invariants.
struct FaultSpec {
  std::string id;  // summary row key; defaults to "fault<index>" at load time
  int agent_id = 0;
  FaultKind kind = FaultKind::actuator_state;
  double start_time = 0.0;  // t_fault, s; the fault persists once started

  // actuator_state
  Eigen::Vector3d position_bias{Eigen::Vector3d::Zero()};  // m per tick
  Eigen::Vector3d velocity_bias{Eigen::Vector3d::Zero()};  // m/s per tick
  double position_noise_std = 0.0;
  double velocity_noise_std = 0.0;
  double step_bias = 0.0;  // 1-DOF delta added to the commanded step
  double step_noise_std = 0.0;

  // actuator_pointing / sensor_blackout
  double misalignment_angle = 0.0;                   // rad
  std::optional<Eigen::Vector3d> misalignment_axis;  // default: fixed axis perp. to pointing

  // sensor_degradation
  double beta = 1.0;

  std::optional<std::uint64_t> seed;  // substream salt override
};

bool fault_active(const FaultSpec& spec, double t);

/// Throws std::invalid_argument on violated invariants
/// (start_time >= 0, beta in (0,1), misalignment angle in (0, pi]).
void validate(const FaultSpec& spec);

/// Adds the per-tick bias and seeded noise to position and velocity.
/// Requires kind == actuator_state and t >= start_time.
void inject_actuator_state(RelativeState& state, const FaultSpec& spec, double t,
                           RngStream& rng);

/// 1-DOF variant: realized step = commanded + bias + noise.
double inject_actuator_step(double commanded, const FaultSpec& spec, double t, RngStream& rng);

/// Rotates the pointing by the misalignment angle about the configured
/// axis, or about a fixed axis perpendicular to the pointing when none is
/// given. Output stays unit length within 1e-12. Requires kind ==
/// actuator_pointing or sensor_blackout.
Eigen::Vector3d inject_pointing_misalignment(const Eigen::Vector3d& pointing,
                                             const FaultSpec& spec);

/// Returns the sensor with degradation = beta; geometry unchanged.
/// Requires kind == sensor_degradation and beta in (0, 1).
SensorModel inject_sensor_degradation(const SensorModel& sensor, const FaultSpec& spec);

}  // namespace inspectfdi
