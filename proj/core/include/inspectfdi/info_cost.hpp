#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "inspectfdi/geometry.hpp"

namespace inspectfdi {

/// One observing agent as seen by the cost functional.
struct AgentSensor {
  int id = 0;
  Pose pose;
  SensorModel sensor;
};

/// Global cost H split per the exact decomposition
///   H = sum_s phi psi (w^-1 + accumulated) + sum_i H_i,
/// with psi(s) the squared fused variance. Both identities
/// (prior_term + sum H_i = H and sum per_poi_cost = H) hold to
/// rounding; tests pin them at 1e-12 relative.
struct CostBreakdown {
  double global_cost = 0.0;
  double prior_term = 0.0;
  std::map<int, double> agent_contributions;  // H_i keyed by agent id
  std::vector<double> per_poi_cost;           // phi * H_POI by poi index
};

/// Fused variance (w^-1 + sum sigma^-1)^-1 with the prior given as an
/// inverse, so an improper prior (inverse_prior = 0) is representable.
/// Requires positive total information.
double fuse_information(double inverse_prior, std::span<const double> inverse_variances);

/// Fused variance for a proper prior w > 0; result in (0, w].
double fuse_poi(double prior_variance, std::span<const double> inverse_variances);

/// psi = (w^-1 + sum sigma^-1)^-2; equals the squared fused variance.
double consensus_factor_information(double inverse_prior,
                                    std::span<const double> inverse_variances);
double consensus_factor(double prior_variance, std::span<const double> inverse_variances);

struct CostEvaluation {
  CostBreakdown breakdown;
  std::vector<std::vector<int>> visible;  // per agent (input order), ascending poi ids
};

/// Evaluates H over the POI field for the given agents. Each POI's
/// accumulated information joins its prior inside the consensus factor;
/// the per-agent terms are the instantaneous degradation-scaled inverse
/// variances. `parallel` fans the per-agent visibility/variance pass out
/// to one task per agent; results are bit-identical to the serial path.
CostBreakdown evaluate_cost(const std::vector<PointOfInterest>& pois,
                            const std::vector<AgentSensor>& agents,
                            const Vec3& target_center, bool parallel = false);
CostEvaluation evaluate_cost_detailed(const std::vector<PointOfInterest>& pois,
                                      const std::vector<AgentSensor>& agents,
                                      const Vec3& target_center, bool parallel = false);

struct PointingChoice {
  Vec3 pointing{Vec3::UnitX()};
  std::optional<int> target_poi;  // empty when no POI faces the agent
};

/// Direction (from the target center, matching the apex-at-center cone)
/// of the facing POI with the largest current fused variance
/// 1 / (w^-1 + accumulated). Ties break to the lowest poi id. When no POI
/// faces the agent the previous pointing is returned unchanged with an
/// empty target.
PointingChoice pointing_policy(const Pose& agent, const std::vector<PointOfInterest>& pois,
                               const SensorModel& sensor, const Vec3& target_center);

/// Adds beta * sigma^-1 * dt * rate_scale to every visible POI's
/// accumulated information. rate_scale = 0 gives the purely instantaneous
/// mode (no accumulation).
void accumulate_observations(std::vector<PointOfInterest>& pois,
                             const std::vector<AgentSensor>& agents, const Vec3& target_center,
                             double dt, double rate_scale = 1.0);

// ---------------------------------------------------------------------------
// Planar analytic scenario: agents translating on the x axis observing
// fixed POIs at (sx, sy), sigma^-1 = 1 / (k ((x - sx)^2 + sy^2)).
// ---------------------------------------------------------------------------

struct AnalyticPoi {
  double sx = 0.0;
  double sy = 0.0;
  double importance = 1.0;
  double inverse_prior = 0.0;  // w^-1; 0 = improper prior
};

double analytic_inverse_variance(double x, const AnalyticPoi& poi, double k);

/// Global cost H for agents at abscissas xs with variance gains ks and
/// degradations betas (spans must have equal length).
double analytic_cost(std::span<const double> xs, std::span<const double> ks,
                     std::span<const double> betas, std::span<const AnalyticPoi> pois);

/// Instantaneous contribution H_i of one agent with the consensus factor
/// frozen at the current configuration.
double analytic_contribution(std::size_t agent_index, std::span<const double> xs,
                             std::span<const double> ks, std::span<const double> betas,
                             std::span<const AnalyticPoi> pois);

/// dH/dx for the agent at `x`:
///   sum_s phi (2/k) H_POI^2 (x - sx) / ((x - sx)^2 + sy^2)^2
/// where H_POI fuses the POI's inverse prior, the other agents' totals
/// (`other_inverse_info`, one entry per POI) and this agent's own term.
/// Throws SingularGeometryError when the agent sits on a POI.
double gradient_1dof(double x, std::span<const double> other_inverse_info,
                     std::span<const AnalyticPoi> pois, double k);

}  // namespace inspectfdi
