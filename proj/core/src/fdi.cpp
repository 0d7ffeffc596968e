#include "inspectfdi/fdi.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace inspectfdi {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::nominal:
      return "nominal";
    case Classification::degraded:
      return "degraded";
    case Classification::improved:
      return "improved";
  }
  return "unknown";
}

namespace {

double degeneracy_floor(const AgentWindowRecord& r, double scale) {
  return scale * std::max(1.0, std::abs(r.h_prev));
}

}  // namespace

MetricValue fault_metric(const AgentWindowRecord& record, double floor_scale) {
  const double d_actual = record.h_actual - record.h_prev;
  const double d_pred = record.h_pred - record.h_prev;
  if (record.h_actual == record.h_pred) {
    return {0.0, false};
  }
  const double floor = degeneracy_floor(record, floor_scale);
  if (std::abs(d_pred) <= floor) {
    if (std::abs(d_actual) <= floor) {
      return {0.0, false};  // nothing predicted, nothing happened
    }
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {std::abs(1.0 - d_actual / d_pred), false};
}

Classification classify(const AgentWindowRecord& record, double epsilon, double floor_scale) {
  const double d_actual = record.h_actual - record.h_prev;
  const double d_pred = record.h_pred - record.h_prev;
  const double floor = degeneracy_floor(record, floor_scale);
  if (std::abs(d_pred) <= floor) {
    if (std::abs(d_actual) <= floor) {
      return Classification::nominal;
    }
    // Limit of the ratio rule as d_pred -> 0.
    return d_actual > 0.0 ? Classification::improved : Classification::degraded;
  }
  const double x = d_actual / d_pred;
  if (x < 0.0) {
    return Classification::degraded;  // sign mismatch
  }
  if (x < 1.0 - epsilon) {
    return Classification::degraded;
  }
  if (x > 1.0 + epsilon) {
    return Classification::improved;
  }
  return Classification::nominal;
}

Eigen::Vector3d sample_cone(const Eigen::Vector3d& axis, double epsilon, RngStream& rng) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    throw std::invalid_argument("sample_cone: zero axis");
  }
  const Eigen::Vector3d w = axis / n;
  // Uniform on the cap: cos(theta) ~ U[cos(eps), 1], azimuth uniform.
  const double cos_theta = 1.0 - rng.uniform() * (1.0 - std::cos(epsilon));
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);

  Eigen::Vector3d u = w.cross(std::abs(w.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                    : Eigen::Vector3d::UnitY());
  u.normalize();
  const Eigen::Vector3d v = w.cross(u);
  return cos_theta * w + sin_theta * (std::cos(phi) * u + std::sin(phi) * v);
}

double adaptive_threshold(const AgentWindowRecord& record,
                          const Eigen::Vector3d& nominal_target_dir,
                          const TwinPointingEval& twin_eval, const FdiConfig& config,
                          RngStream& rng) {
  if (config.threshold_samples < 1) {
    throw std::invalid_argument("adaptive_threshold: empty sample budget");
  }
  const double d_pred = record.h_pred - record.h_prev;
  const double floor = degeneracy_floor(record, config.degeneracy_floor_scale);
  const bool actual_known = std::isfinite(record.h_actual);
  const double actual_dev =
      actual_known ? std::abs(record.h_actual - record.h_pred)
                   : std::numeric_limits<double>::infinity();

  double tau = std::numeric_limits<double>::infinity();
  for (int i = 0; i < config.threshold_samples; ++i) {
    const Eigen::Vector3d pointing = sample_cone(nominal_target_dir, config.epsilon, rng);
    const ThresholdSample sample = twin_eval(pointing);
    const double dev = std::abs(sample.contribution - record.h_pred);
    if (!(dev > 0.0) || dev > actual_dev) {
      continue;  // outside the admissible band
    }
    if (std::abs(d_pred) <= floor) {
      continue;  // ratio undefined; fall back below
    }
    const double candidate = std::abs(1.0 - (sample.contribution - record.h_prev) / d_pred);
    tau = std::min(tau, candidate);
  }
  if (!std::isfinite(tau)) {
    return config.tau_floor;
  }
  return tau;
}

double effective_threshold(const AgentWindowRecord& record, double sampled_tau,
                           const FdiConfig& config) {
  const double d_pred = std::abs(record.h_pred - record.h_prev);
  if (d_pred > 0.0 && std::isfinite(config.epsilon_nom / d_pred)) {
    return std::max(sampled_tau, config.epsilon_nom / d_pred);
  }
  return sampled_tau;
}

std::vector<Detection> detect(double t, std::span<const AgentWindowRecord> records,
                              std::span<const double> thresholds, const FdiConfig& config,
                              const std::map<int, double>& fault_start_by_agent) {
  if (records.size() != thresholds.size()) {
    throw std::invalid_argument("detect: one threshold per record required");
  }
  std::vector<Detection> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AgentWindowRecord& r = records[i];
    const MetricValue m = fault_metric(r, config.degeneracy_floor_scale);
    const double d_actual = std::abs(r.h_actual - r.h_prev);
    const double threshold = effective_threshold(r, thresholds[i], config);
    const bool fire = m.degenerate ? d_actual > config.epsilon_nom : m.value > threshold;
    if (!fire) {
      continue;
    }
    Detection d;
    d.agent_id = r.agent_id;
    d.time = t;
    d.metric = m.value;
    d.threshold = threshold;
    // epsilon_nom bounds the absolute gain deviation; in ratio space the
    // nominal band is epsilon_nom / |dH_pred|.
    const double d_pred = std::abs(r.h_pred - r.h_prev);
    const double ratio_band = d_pred > 0.0 ? config.epsilon_nom / d_pred : config.epsilon_nom;
    d.classification = classify(r, ratio_band, config.degeneracy_floor_scale);
    auto it = fault_start_by_agent.find(r.agent_id);
    if (it != fault_start_by_agent.end() && t >= it->second) {
      d.latency = t - it->second;
    }
    out.push_back(std::move(d));
  }
  return out;
}

GlobalDetection global_detect(std::span<const double> times, std::span<const double> h,
                              std::span<const double> h_nom, double delta_threshold,
                              bool absolute) {
  if (times.size() != h.size() || times.size() != h_nom.size()) {
    throw std::invalid_argument("global_detect: series must share one time grid");
  }
  GlobalDetection result;
  if (times.size() < 2) {
    return result;
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) {
      throw std::invalid_argument("global_detect: times must be strictly increasing");
    }
    const double f0 = h[i - 1] - h_nom[i - 1];
    const double f1 = h[i] - h_nom[i];
    integral += 0.5 * (f0 + f1) * dt;
    const double lhs = absolute ? std::abs(integral) : integral;
    if (lhs >= delta_threshold * (times[i] - times[0])) {
      result.detected = true;
      result.time = times[i];
      return result;
    }
  }
  return result;
}

}  // namespace inspectfdi
