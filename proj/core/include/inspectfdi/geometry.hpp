#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace inspectfdi {

using Vec3 = Eigen::Vector3d;

/// Observer pose: position in the target-centered LVLH frame plus a unit
/// pointing direction. Attitude beyond the pointing vector is not modeled.
struct Pose {
  Vec3 position{Vec3::Zero()};
  Vec3 pointing{Vec3::UnitX()};
};

/// True when the pointing vector is unit length within `tol`.
bool pose_valid(const Pose& pose, double tol = 1e-12);

/// Surface point whose estimation variance the mission reduces.
/// `accumulated_information` is the running sum of beta * sigma^-1 * dt
/// gathered so far; it only grows over a run.
struct PointOfInterest {
  Vec3 location{Vec3::Zero()};
  double importance = 1.0;       // phi(s), in [0, 1]
  double prior_variance = 1.0;   // w, > 0
  double accumulated_information = 0.0;
};

/// Conical field-of-view camera with quadratic distance variance
/// sigma = k * dist^2. `degradation` scales the inverse variance
/// (beta in (0, 1], 1 = healthy).
struct SensorModel {
  double half_angle = 0.3490658503988659;  // 20 degrees
  double variance_gain = 1.0;              // k, > 0
  double degradation = 1.0;                // beta
};

/// `count` POIs uniformly distributed on the sphere of `radius` around the
/// origin, deterministic in `seed`. Importance and prior variance take the
/// struct defaults; callers override per scenario.
std::vector<PointOfInterest> sample_sphere_pois(std::size_t count, double radius,
                                                std::uint64_t seed);

/// Cone test (apex at the target center, axis along the pointing vector,
/// boundary inclusive) plus a facing test: the POI's outward normal must
/// have positive dot product with the vector toward the observer.
bool visible(const Pose& pose, const PointOfInterest& poi, const SensorModel& sensor,
             const Vec3& target_center);

/// k * dist^2 when the POI is visible, +infinity otherwise.
/// Throws SingularGeometryError when the observer sits exactly on a
/// visible POI.
double sensor_variance(const Pose& pose, const PointOfInterest& poi,
                       const SensorModel& sensor, const Vec3& target_center);

/// degradation / (k * dist^2) when visible; exactly 0 otherwise.
double inverse_variance(const Pose& pose, const PointOfInterest& poi,
                        const SensorModel& sensor, const Vec3& target_center);

}  // namespace inspectfdi
