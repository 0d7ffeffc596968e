#include "inspectfdi/info_cost.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "inspectfdi/errors.hpp"

namespace inspectfdi {

namespace {

void check_inverse_variances(std::span<const double> inverse_variances) {
  for (double v : inverse_variances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("fuse: inverse variances must be finite and >= 0");
    }
  }
}

double total_information(double inverse_prior, std::span<const double> inverse_variances) {
  if (!(inverse_prior >= 0.0) || !std::isfinite(inverse_prior)) {
    throw std::invalid_argument("fuse: inverse prior must be finite and >= 0");
  }
  check_inverse_variances(inverse_variances);
  double total = inverse_prior;
  for (double v : inverse_variances) {
    total += v;
  }
  return total;
}

}  // namespace

double fuse_information(double inverse_prior, std::span<const double> inverse_variances) {
  const double total = total_information(inverse_prior, inverse_variances);
  if (!(total > 0.0)) {
    throw std::invalid_argument("fuse_information: total information is zero");
  }
  return 1.0 / total;
}

double fuse_poi(double prior_variance, std::span<const double> inverse_variances) {
  if (!(prior_variance > 0.0)) {
    throw std::invalid_argument("fuse_poi: prior variance must be > 0");
  }
  // The double reciprocal can overshoot w by an ulp; the fused variance
  // never exceeds the prior.
  return std::min(fuse_information(1.0 / prior_variance, inverse_variances), prior_variance);
}

double consensus_factor_information(double inverse_prior,
                                    std::span<const double> inverse_variances) {
  const double fused = fuse_information(inverse_prior, inverse_variances);
  return fused * fused;
}

double consensus_factor(double prior_variance, std::span<const double> inverse_variances) {
  const double fused = fuse_poi(prior_variance, inverse_variances);
  return fused * fused;
}

CostEvaluation evaluate_cost_detailed(const std::vector<PointOfInterest>& pois,
                                      const std::vector<AgentSensor>& agents,
                                      const Vec3& target_center, bool parallel) {
  if (pois.empty()) {
    throw std::invalid_argument("evaluate_cost: POI list is empty");
  }

  const std::size_t n_agents = agents.size();
  const std::size_t n_pois = pois.size();

  // Per-agent instantaneous inverse variances; independent across agents,
  // so the parallel path writes disjoint buffers and keeps the fusion loop
  // serial and deterministic.
  std::vector<std::vector<double>> inv(n_agents);
  auto fill_agent = [&](std::size_t a) {
    auto& row = inv[a];
    row.resize(n_pois);
    for (std::size_t s = 0; s < n_pois; ++s) {
      row[s] = inverse_variance(agents[a].pose, pois[s], agents[a].sensor, target_center);
    }
  };
  if (parallel && n_agents > 1) {
    std::vector<std::future<void>> futures;
    futures.reserve(n_agents);
    for (std::size_t a = 0; a < n_agents; ++a) {
      futures.push_back(std::async(std::launch::async, fill_agent, a));
    }
    for (auto& f : futures) {
      f.get();
    }
  } else {
    for (std::size_t a = 0; a < n_agents; ++a) {
      fill_agent(a);
    }
  }

  CostEvaluation out;
  out.breakdown.per_poi_cost.resize(n_pois, 0.0);
  out.visible.resize(n_agents);
  std::vector<double> contributions(n_agents, 0.0);

  for (std::size_t s = 0; s < n_pois; ++s) {
    const PointOfInterest& poi = pois[s];
    if (!(poi.prior_variance > 0.0)) {
      throw std::invalid_argument("evaluate_cost: POI prior variance must be > 0");
    }
    const double consensus_info = 1.0 / poi.prior_variance + poi.accumulated_information;
    double total = consensus_info;
    for (std::size_t a = 0; a < n_agents; ++a) {
      total += inv[a][s];
    }
    const double fused = 1.0 / total;  // H_POI
    const double psi = fused * fused;
    const double phi = poi.importance;

    out.breakdown.per_poi_cost[s] = phi * fused;
    out.breakdown.global_cost += phi * fused;
    out.breakdown.prior_term += phi * psi * consensus_info;
    for (std::size_t a = 0; a < n_agents; ++a) {
      if (inv[a][s] > 0.0) {
        contributions[a] += phi * psi * inv[a][s];
        out.visible[a].push_back(static_cast<int>(s));
      }
    }
  }

  for (std::size_t a = 0; a < n_agents; ++a) {
    out.breakdown.agent_contributions[agents[a].id] = contributions[a];
  }
  return out;
}

CostBreakdown evaluate_cost(const std::vector<PointOfInterest>& pois,
                            const std::vector<AgentSensor>& agents, const Vec3& target_center,
                            bool parallel) {
  return evaluate_cost_detailed(pois, agents, target_center, parallel).breakdown;
}

PointingChoice pointing_policy(const Pose& agent, const std::vector<PointOfInterest>& pois,
                               const SensorModel& /*sensor*/, const Vec3& target_center) {
  if (pois.empty()) {
    throw std::invalid_argument("pointing_policy: POI list is empty");
  }
  PointingChoice choice;
  choice.pointing = agent.pointing;
  double best_variance = -1.0;
  for (std::size_t s = 0; s < pois.size(); ++s) {
    const PointOfInterest& poi = pois[s];
    const Vec3 radial = poi.location - target_center;
    if (radial.dot(agent.position - poi.location) <= 0.0) {
      continue;  // does not face the agent
    }
    if (!(poi.prior_variance > 0.0)) {
      throw std::invalid_argument("pointing_policy: POI prior variance must be > 0");
    }
    const double variance = 1.0 / (1.0 / poi.prior_variance + poi.accumulated_information);
    if (variance > best_variance) {
      best_variance = variance;
      choice.target_poi = static_cast<int>(s);
    }
  }
  if (choice.target_poi) {
    const Vec3 radial = pois[static_cast<std::size_t>(*choice.target_poi)].location - target_center;
    const double n = radial.norm();
    if (n > 0.0) {
      choice.pointing = radial / n;
    } else {
      choice.target_poi.reset();  // POI at the apex has no direction
    }
  }
  return choice;
}

void accumulate_observations(std::vector<PointOfInterest>& pois,
                             const std::vector<AgentSensor>& agents, const Vec3& target_center,
                             double dt, double rate_scale) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("accumulate_observations: dt must be > 0");
  }
  if (rate_scale == 0.0) {
    return;  // instantaneous mode
  }
  for (auto& poi : pois) {
    double gain = 0.0;
    for (const auto& agent : agents) {
      gain += inverse_variance(agent.pose, poi, agent.sensor, target_center);
    }
    poi.accumulated_information += gain * dt * rate_scale;
  }
}

// ---------------------------------------------------------------------------
// Planar analytic scenario
// ---------------------------------------------------------------------------

double analytic_inverse_variance(double x, const AnalyticPoi& poi, double k) {
  const double dx = x - poi.sx;
  const double d2 = dx * dx + poi.sy * poi.sy;
  if (!(d2 > 0.0)) {
    throw SingularGeometryError("analytic_inverse_variance: agent coincides with POI");
  }
  return 1.0 / (k * d2);
}

namespace {

void check_analytic_sizes(std::span<const double> xs, std::span<const double> ks,
                          std::span<const double> betas) {
  if (xs.size() != ks.size() || xs.size() != betas.size()) {
    throw std::invalid_argument("analytic cost: xs/ks/betas size mismatch");
  }
}

}  // namespace

double analytic_cost(std::span<const double> xs, std::span<const double> ks,
                     std::span<const double> betas, std::span<const AnalyticPoi> pois) {
  check_analytic_sizes(xs, ks, betas);
  double h = 0.0;
  for (const AnalyticPoi& poi : pois) {
    double total = poi.inverse_prior;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      total += betas[i] * analytic_inverse_variance(xs[i], poi, ks[i]);
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument("analytic_cost: total information is zero");
    }
    h += poi.importance / total;
  }
  return h;
}

double analytic_contribution(std::size_t agent_index, std::span<const double> xs,
                             std::span<const double> ks, std::span<const double> betas,
                             std::span<const AnalyticPoi> pois) {
  check_analytic_sizes(xs, ks, betas);
  if (agent_index >= xs.size()) {
    throw std::invalid_argument("analytic_contribution: agent index out of range");
  }
  double contribution = 0.0;
  for (const AnalyticPoi& poi : pois) {
    double total = poi.inverse_prior;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      total += betas[i] * analytic_inverse_variance(xs[i], poi, ks[i]);
    }
    const double fused = 1.0 / total;
    contribution += poi.importance * fused * fused * betas[agent_index] *
                    analytic_inverse_variance(xs[agent_index], poi, ks[agent_index]);
  }
  return contribution;
}

double gradient_1dof(double x, std::span<const double> other_inverse_info,
                     std::span<const AnalyticPoi> pois, double k) {
  if (other_inverse_info.size() != pois.size()) {
    throw std::invalid_argument("gradient_1dof: one other-agent total per POI required");
  }
  double g = 0.0;
  for (std::size_t s = 0; s < pois.size(); ++s) {
    const AnalyticPoi& poi = pois[s];
    const double dx = x - poi.sx;
    const double d2 = dx * dx + poi.sy * poi.sy;
    if (!(d2 > 0.0)) {
      throw SingularGeometryError("gradient_1dof: agent coincides with POI");
    }
    const double total = poi.inverse_prior + other_inverse_info[s] + 1.0 / (k * d2);
    const double fused = 1.0 / total;
    g += poi.importance * (2.0 / k) * fused * fused * dx / (d2 * d2);
  }
  return g;
}

}  // namespace inspectfdi
