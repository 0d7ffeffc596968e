#include "inspectfdi/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "inspectfdi/errors.hpp"

namespace inspectfdi {

namespace {

// Substream salts.
constexpr std::uint64_t kSaltPois = 0x706F6973;        // "pois"
constexpr std::uint64_t kSaltNominalNoise = 0x6E6F6D;  // "nom"
constexpr std::uint64_t kSaltThreshold = 0x746175;     // "tau"
constexpr std::uint64_t kSaltFault = 0x666C74;         // "flt"

std::uint64_t fault_stream_seed(const ScenarioConfig& cfg, const FaultSpec& spec) {
  const std::uint64_t base = spec.seed.value_or(cfg.seed);
  return derive_seed(base, {kSaltFault, static_cast<std::uint64_t>(spec.agent_id),
                            static_cast<std::uint64_t>(spec.kind)});
}

std::map<int, double> earliest_fault_starts(const ScenarioConfig& cfg) {
  std::map<int, double> starts;
  for (const FaultSpec& f : cfg.faults) {
    auto [it, inserted] = starts.try_emplace(f.agent_id, f.start_time);
    if (!inserted) {
      it->second = std::min(it->second, f.start_time);
    }
  }
  return starts;
}

std::string expected_signature(const FaultSpec& spec) {
  return "Hm_" + std::to_string(spec.agent_id) + ">0";
}

/// Applies configured faults and nominal process noise during the real
/// run. Each fault and each agent's noise own a derived stream, so adding
/// a fault to one agent leaves every other agent's draws untouched.
class ScenarioPerturbation : public TickPerturbation {
 public:
  explicit ScenarioPerturbation(const ScenarioConfig& cfg) : cfg_(cfg) {
    for (const FaultSpec& f : cfg.faults) {
      fault_streams_.emplace_back(fault_stream_seed(cfg, f));
    }
    for (const AgentConfig& a : cfg.agents) {
      noise_streams_.try_emplace(a.id,
                                 derive_seed(cfg.seed, {kSaltNominalNoise,
                                                        static_cast<std::uint64_t>(a.id)}));
    }
  }

  void perturb_state(AgentState& agent, double t) override {
    const NominalNoise& noise = cfg_.nominal_noise;
    if (noise.position_std > 0.0 || noise.velocity_std > 0.0) {
      RngStream& rng = noise_streams_.at(agent.id);
      for (int i = 0; i < 3; ++i) {
        if (noise.position_std > 0.0) {
          agent.state.position[i] += noise.position_std * rng.gaussian();
        }
      }
      for (int i = 0; i < 3; ++i) {
        if (noise.velocity_std > 0.0) {
          agent.state.velocity[i] += noise.velocity_std * rng.gaussian();
        }
      }
    }
    for (std::size_t i = 0; i < cfg_.faults.size(); ++i) {
      const FaultSpec& f = cfg_.faults[i];
      if (f.agent_id == agent.id && f.kind == FaultKind::actuator_state &&
          fault_active(f, t)) {
        inject_actuator_state(agent.state, f, t, fault_streams_[i]);
      }
    }
  }

  void perturb_pointing(AgentState& agent, double t) override {
    for (const FaultSpec& f : cfg_.faults) {
      if (f.agent_id != agent.id || !fault_active(f, t)) {
        continue;
      }
      if (f.kind == FaultKind::actuator_pointing || f.kind == FaultKind::sensor_blackout) {
        agent.pointing = inject_pointing_misalignment(agent.pointing, f);
      }
    }
  }

  double degradation(int agent_id, double t) override {
    double beta = 1.0;
    for (const FaultSpec& f : cfg_.faults) {
      if (f.agent_id == agent_id && f.kind == FaultKind::sensor_degradation &&
          fault_active(f, t)) {
        beta *= f.beta;
      }
    }
    return beta;
  }

 private:
  const ScenarioConfig& cfg_;
  std::vector<RngStream> fault_streams_;
  std::map<int, RngStream> noise_streams_;
};

std::size_t tick_count(double span, double dt) {
  return static_cast<std::size_t>(std::llround(span / dt));
}

struct ReportBuilder {
  explicit ReportBuilder(const ScenarioConfig& cfg) {
    for (const AgentConfig& a : cfg.agents) {
      report.agent_ids.push_back(a.id);
    }
    std::sort(report.agent_ids.begin(), report.agent_ids.end());
    for (int id : report.agent_ids) {
      for (std::size_t i = 0; i < cfg.agents.size(); ++i) {
        if (cfg.agents[i].id == id) {
          world_index.push_back(i);
          break;
        }
      }
    }
    fault_starts = earliest_fault_starts(cfg);
  }

  /// Latches the first detection per agent; later crossings refresh the
  /// classification only.
  void latch(const std::vector<Detection>& detections) {
    for (const Detection& d : detections) {
      auto it = latched.find(d.agent_id);
      if (it == latched.end()) {
        latched.emplace(d.agent_id, d);
      } else {
        it->second.classification = d.classification;
      }
    }
  }

  void finalize(const ScenarioConfig& cfg) {
    for (const auto& [id, det] : latched) {
      report.detections.push_back(det);
    }
    std::sort(report.detections.begin(), report.detections.end(),
              [](const Detection& a, const Detection& b) {
                return a.time != b.time ? a.time < b.time : a.agent_id < b.agent_id;
              });
    for (const FaultSpec& f : cfg.faults) {
      FaultSummary s;
      s.fault_id = f.id;
      s.expected_signature = expected_signature(f);
      auto it = latched.find(f.agent_id);
      if (it != latched.end() && it->second.time >= f.start_time) {
        s.detected = true;
        s.latency = it->second.time - f.start_time;
        s.observed_behavior = to_string(it->second.classification);
      } else {
        s.detected = false;
        s.observed_behavior = to_string(Classification::nominal);
      }
      report.summary.push_back(std::move(s));
    }
    if (cfg.fdi.global_delta_threshold) {
      std::vector<double> times, h, h_nom;
      times.reserve(report.rows.size());
      for (const RunRow& row : report.rows) {
        times.push_back(row.t);
        h.push_back(row.h_global);
        h_nom.push_back(row.h_global_pred);
      }
      report.global = global_detect(times, h, h_nom, *cfg.fdi.global_delta_threshold,
                                    cfg.fdi.global_absolute);
    }
  }

  RunReport report;
  std::vector<std::size_t> world_index;  // report column -> config/world index
  std::map<int, double> fault_starts;
  std::map<int, Detection> latched;
};

double guarded_ratio(double d_actual, double d_pred, double floor) {
  if (std::abs(d_pred) <= floor) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return d_actual / d_pred;
}

RunReport run_sphere(const ScenarioConfig& cfg) {
  WorldState world;
  world.target_center = cfg.target.center;
  world.target_radius = cfg.target.radius;
  if (cfg.target.poi_count > 0) {
    world.pois = sample_sphere_pois(cfg.target.poi_count, cfg.target.radius,
                                    derive_seed(cfg.seed, {kSaltPois}));
    for (PointOfInterest& poi : world.pois) {
      poi.location += cfg.target.center;
      poi.importance = cfg.target.importance;
      poi.prior_variance = cfg.target.prior_variance;
    }
  } else {
    world.pois = cfg.target.explicit_pois;
  }

  for (const AgentConfig& a : cfg.agents) {
    AgentState agent;
    agent.id = a.id;
    agent.sensor = a.sensor;
    if (const auto* init = std::get_if<AgentInitState>(&a.init)) {
      agent.state = init->state;
    } else {
      agent.state = pro_initial_state(std::get<AgentInitPro>(a.init).pro, cfg.orbit);
    }
    const Vec3 toward_target = cfg.target.center - agent.state.position;
    const double n = toward_target.norm();
    agent.pointing = n > 0.0 ? Vec3(toward_target / n) : Vec3::UnitX();
    world.agents.push_back(std::move(agent));
  }

  SimParams params;
  params.dt = cfg.dt;
  params.orbit = cfg.orbit;
  params.rate_scale = cfg.rate_scale;
  params.parallel = cfg.parallel;

  const std::size_t total_ticks = tick_count(cfg.duration, cfg.dt);
  const std::size_t window_ticks = tick_count(cfg.fdi.window, cfg.dt);
  const std::size_t diag_every = tick_count(cfg.fdi.tick, cfg.dt);

  ScenarioPerturbation hooks(cfg);
  ReportBuilder builder(cfg);
  const std::size_t n_agents = world.agents.size();

  std::map<int, RngStream> tau_streams;
  for (const AgentState& a : world.agents) {
    tau_streams.try_emplace(
        a.id, derive_seed(cfg.seed, {kSaltThreshold, static_cast<std::uint64_t>(a.id)}));
  }

  std::vector<double> cur_metric(n_agents, 0.0);
  std::vector<double> cur_tau(n_agents, cfg.fdi.tau_floor);
  std::vector<double> cur_ratio(n_agents, 1.0);

  // The metric compares information gained since the window anchor:
  // cumulative sums of the instantaneous contributions, realized vs twin.
  std::vector<double> cum_gain(n_agents, 0.0);       // realized, since the anchor
  std::vector<double> cum_gain_pred(n_agents, 0.0);  // twin, since the anchor

  WindowPrediction pred;
  std::size_t anchor_tick = 0;

  for (std::size_t k = 0; k <= total_ticks; ++k) {
    world_propagate(world, params, &hooks, k == 0);

    if (k % window_ticks == 0) {
      // Assignment phase: the twin plans the window from the realized
      // state; the real run executes the planned pointing below.
      pred = predict_nominal(world, params, std::min(window_ticks, total_ticks - k),
                             diag_every);
      anchor_tick = k;
    }
    const std::size_t j = k - anchor_tick;
    world_point(world, params, &hooks, &pred.plan_pointing[j]);

    TickRecord rec = world_evaluate(world, params);
    if (j == 0) {
      std::fill(cum_gain.begin(), cum_gain.end(), 0.0);
      std::fill(cum_gain_pred.begin(), cum_gain_pred.end(), 0.0);
    } else {
      // Windowed gains exclude the anchor tick itself (both sides share it).
      for (std::size_t i = 0; i < n_agents; ++i) {
        cum_gain[i] += rec.cost.agent_contributions.at(world.agents[i].id) * cfg.dt;
        cum_gain_pred[i] += pred.h_agent[j][i] * cfg.dt;
      }
    }

    // Diagnostics at within-window ticks only: the anchor itself carries
    // no information (both deltas are zero by construction).
    if (j > 0 && j % diag_every == 0) {
      const std::size_t d = j / diag_every;
      const TwinSnapshot& snap = pred.diag_snapshots[d];
      std::vector<AgentWindowRecord> records(n_agents);
      std::vector<double> thresholds(n_agents, cfg.fdi.tau_floor);
      for (std::size_t i = 0; i < n_agents; ++i) {
        AgentWindowRecord& r = records[i];
        r.agent_id = world.agents[i].id;
        r.h_prev = 0.0;
        r.h_actual = cum_gain[i];
        r.h_pred = cum_gain_pred[i];
        r.visible_pred = pred.diag_visible[d][i];
        r.visible_actual = rec.visible[i];

        // The sample swaps the current tick's instantaneous contribution
        // for the perturbed-pointing one inside the windowed gain.
        auto twin_eval = [&](const Eigen::Vector3d& pointing) -> ThresholdSample {
          std::vector<AgentSensor> sensors;
          sensors.reserve(snap.agents.size());
          for (const AgentState& a : snap.agents) {
            sensors.push_back({a.id, Pose{a.state.position, a.pointing}, a.sensor});
          }
          sensors[i].pose.pointing = pointing;
          CostEvaluation ev = evaluate_cost_detailed(snap.pois, sensors, world.target_center,
                                                     params.parallel);
          const double inst_sample = ev.breakdown.agent_contributions.at(r.agent_id);
          const double inst_pred = pred.h_agent[j][i];
          return {cum_gain_pred[i] + (inst_sample - inst_pred) * cfg.dt,
                  std::move(ev.visible[i])};
        };
        thresholds[i] = adaptive_threshold(r, snap.agents[i].pointing, twin_eval, cfg.fdi,
                                           tau_streams.at(r.agent_id));

        const MetricValue m = fault_metric(r, cfg.fdi.degeneracy_floor_scale);
        cur_metric[i] = m.value;
        cur_tau[i] = effective_threshold(r, thresholds[i], cfg.fdi);
        cur_ratio[i] =
            guarded_ratio(r.h_actual - r.h_prev, r.h_pred - r.h_prev,
                          cfg.fdi.degeneracy_floor_scale * std::max(1.0, std::abs(r.h_prev)));
      }
      builder.latch(detect(rec.t, records, thresholds, cfg.fdi, builder.fault_starts));
    }

    RunRow row;
    row.t = rec.t;
    row.h_global = rec.cost.global_cost;
    row.h_global_pred = pred.h_global[j];
    for (std::size_t col = 0; col < builder.report.agent_ids.size(); ++col) {
      const std::size_t i = builder.world_index[col];
      row.h_agent.push_back(rec.cost.agent_contributions.at(world.agents[i].id));
      row.h_agent_pred.push_back(pred.h_agent[j][i]);
      row.metric.push_back(cur_metric[i]);
      row.threshold.push_back(cur_tau[i]);
      row.ratio.push_back(cur_ratio[i]);
    }
    builder.report.rows.push_back(std::move(row));

    world_accumulate(world, params);
  }

  builder.finalize(cfg);
  return builder.report;
}

RunReport run_analytic(const ScenarioConfig& cfg) {
  const std::size_t n_agents = cfg.agents.size();
  const std::span<const AnalyticPoi> pois(cfg.analytic_pois);

  std::vector<double> xs_real(n_agents), xs_twin(n_agents), ks(n_agents);
  std::vector<double> steps(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    xs_real[i] = std::get<AgentInitAbscissa>(cfg.agents[i].init).x;
    xs_twin[i] = xs_real[i];
    ks[i] = cfg.agents[i].sensor.variance_gain;
    steps[i] = cfg.agents[i].commanded_step;
  }

  std::vector<RngStream> fault_streams;
  fault_streams.reserve(cfg.faults.size());
  for (const FaultSpec& f : cfg.faults) {
    fault_streams.emplace_back(fault_stream_seed(cfg, f));
  }

  ReportBuilder builder(cfg);
  const std::size_t total_ticks = tick_count(cfg.duration, cfg.dt);
  const std::vector<double> ones(n_agents, 1.0);

  auto betas_at = [&](double t) {
    std::vector<double> betas(n_agents, 1.0);
    for (const FaultSpec& f : cfg.faults) {
      if (f.kind != FaultKind::sensor_degradation || !fault_active(f, t)) {
        continue;
      }
      for (std::size_t i = 0; i < n_agents; ++i) {
        if (cfg.agents[i].id == f.agent_id) {
          betas[i] *= f.beta;
        }
      }
    }
    return betas;
  };

  auto emit_row = [&](double t, const std::vector<double>& metric,
                      const std::vector<double>& ratio, const std::vector<double>& betas) {
    RunRow row;
    row.t = t;
    row.h_global = analytic_cost(xs_real, ks, betas, pois);
    row.h_global_pred = analytic_cost(xs_twin, ks, ones, pois);
    for (std::size_t col = 0; col < builder.report.agent_ids.size(); ++col) {
      const std::size_t i = builder.world_index[col];
      row.h_agent.push_back(analytic_contribution(i, xs_real, ks, betas, pois));
      row.h_agent_pred.push_back(analytic_contribution(i, xs_twin, ks, ones, pois));
      row.metric.push_back(metric[i]);
      row.threshold.push_back(cfg.fdi.tau_floor);
      row.ratio.push_back(ratio[i]);
    }
    builder.report.rows.push_back(std::move(row));
  };

  emit_row(0.0, std::vector<double>(n_agents, 0.0), std::vector<double>(n_agents, 1.0),
           betas_at(0.0));

  for (std::size_t k = 1; k <= total_ticks; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const std::vector<double> betas = betas_at(t);

    // Predicted-model gradient at the realized configuration: it cancels
    // in the ratio, making the per-step metric exactly
    // |1 - beta * dx_real / dx_commanded|.
    std::vector<double> metric(n_agents, 0.0), ratio(n_agents, 1.0);
    std::vector<double> dx_real(n_agents);
    std::vector<AgentWindowRecord> records(n_agents);
    std::vector<double> thresholds(n_agents, cfg.fdi.tau_floor);

    for (std::size_t i = 0; i < n_agents; ++i) {
      std::vector<double> other_info(pois.size(), 0.0);
      for (std::size_t s = 0; s < pois.size(); ++s) {
        for (std::size_t jx = 0; jx < n_agents; ++jx) {
          if (jx != i) {
            other_info[s] += analytic_inverse_variance(xs_real[jx], pois[s], ks[jx]);
          }
        }
      }
      const double grad = gradient_1dof(xs_real[i], other_info, pois, ks[i]);

      dx_real[i] = steps[i];
      for (std::size_t fi = 0; fi < cfg.faults.size(); ++fi) {
        const FaultSpec& f = cfg.faults[fi];
        if (f.kind == FaultKind::actuator_state && f.agent_id == cfg.agents[i].id &&
            fault_active(f, t)) {
          dx_real[i] = inject_actuator_step(dx_real[i], f, t, fault_streams[fi]);
        }
      }

      AgentWindowRecord& r = records[i];
      r.agent_id = cfg.agents[i].id;
      r.h_prev = 0.0;
      r.h_pred = grad * steps[i];
      r.h_actual = betas[i] * grad * dx_real[i];
      const MetricValue m = fault_metric(r, cfg.fdi.degeneracy_floor_scale);
      metric[i] = m.value;
      ratio[i] = guarded_ratio(r.h_actual, r.h_pred, cfg.fdi.degeneracy_floor_scale);
    }

    builder.latch(detect(t, records, thresholds, cfg.fdi, builder.fault_starts));

    for (std::size_t i = 0; i < n_agents; ++i) {
      xs_real[i] = step_1dof(xs_real[i], dx_real[i]);
      xs_twin[i] = step_1dof(xs_twin[i], steps[i]);
    }
    emit_row(t, metric, ratio, betas);
  }

  builder.finalize(cfg);
  return builder.report;
}

}  // namespace

RunReport run(const ScenarioConfig& cfg) {
  return cfg.mode == ScenarioMode::sphere3d ? run_sphere(cfg) : run_analytic(cfg);
}

}  // namespace inspectfdi
