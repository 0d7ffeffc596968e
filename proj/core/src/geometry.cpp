#include "inspectfdi/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "inspectfdi/errors.hpp"
#include "inspectfdi/rng.hpp"

namespace inspectfdi {

bool pose_valid(const Pose& pose, double tol) {
  return pose.position.allFinite() && pose.pointing.allFinite() &&
         std::abs(pose.pointing.norm() - 1.0) <= tol;
}

std::vector<PointOfInterest> sample_sphere_pois(std::size_t count, double radius,
                                                std::uint64_t seed) {
  if (count == 0) {
    throw std::invalid_argument("sample_sphere_pois: count must be >= 1");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("sample_sphere_pois: radius must be > 0");
  }
  RngStream rng(seed);
  std::vector<PointOfInterest> pois;
  pois.reserve(count);
  while (pois.size() < count) {
    Vec3 v(rng.gaussian(), rng.gaussian(), rng.gaussian());
    double n = v.norm();
    if (n < 1e-12) {
      continue;  // essentially impossible, but keeps the normalization safe
    }
    PointOfInterest poi;
    poi.location = (radius / n) * v;
    pois.push_back(poi);
  }
  return pois;
}

bool visible(const Pose& pose, const PointOfInterest& poi, const SensorModel& sensor,
             const Vec3& target_center) {
  const Vec3 radial = poi.location - target_center;
  const double radial_norm = radial.norm();
  if (radial_norm <= 0.0) {
    return false;  // POI at the cone apex has no direction
  }
  // Cone with apex at the target center, aligned with the pointing vector.
  const double cos_angle = pose.pointing.dot(radial) / radial_norm;
  if (cos_angle < std::cos(sensor.half_angle)) {
    return false;
  }
  // Facing test: outward normal toward the observer, strictly.
  const Vec3 to_observer = pose.position - poi.location;
  return radial.dot(to_observer) > 0.0;
}

double sensor_variance(const Pose& pose, const PointOfInterest& poi,
                       const SensorModel& sensor, const Vec3& target_center) {
  if (!visible(pose, poi, sensor, target_center)) {
    return std::numeric_limits<double>::infinity();
  }
  const double dist2 = (pose.position - poi.location).squaredNorm();
  if (dist2 <= 0.0) {
    throw SingularGeometryError("sensor_variance: observer coincides with POI");
  }
  return sensor.variance_gain * dist2;
}

double inverse_variance(const Pose& pose, const PointOfInterest& poi,
                        const SensorModel& sensor, const Vec3& target_center) {
  if (!visible(pose, poi, sensor, target_center)) {
    return 0.0;
  }
  const double dist2 = (pose.position - poi.location).squaredNorm();
  if (dist2 <= 0.0) {
    throw SingularGeometryError("inverse_variance: observer coincides with POI");
  }
  return sensor.degradation / (sensor.variance_gain * dist2);
}

}  // namespace inspectfdi
