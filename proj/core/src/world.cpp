#include "inspectfdi/world.hpp"

namespace inspectfdi {

std::vector<AgentSensor> agent_sensors(const WorldState& world) {
  std::vector<AgentSensor> sensors;
  sensors.reserve(world.agents.size());
  for (const AgentState& a : world.agents) {
    sensors.push_back({a.id, Pose{a.state.position, a.pointing}, a.sensor});
  }
  return sensors;
}

void world_propagate(WorldState& world, const SimParams& params, TickPerturbation* hooks,
                     bool first) {
  if (first) {
    return;
  }
  const double t0 = world.time;
  for (AgentState& agent : world.agents) {
    agent.state = hcw_step(agent.state, Eigen::Vector3d::Zero(), t0, params.dt, params.orbit);
  }
  world.time = t0 + params.dt;
  if (hooks) {
    for (AgentState& agent : world.agents) {
      hooks->perturb_state(agent, world.time);
    }
  }
}

std::vector<PointingChoice> world_point(WorldState& world, const SimParams& params,
                                        TickPerturbation* hooks,
                                        const std::vector<Vec3>* plan) {
  (void)params;
  std::vector<PointingChoice> choices;
  choices.reserve(world.agents.size());
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    AgentState& agent = world.agents[i];
    PointingChoice choice;
    if (plan) {
      choice.pointing = (*plan)[i];
      agent.pointing = choice.pointing;
      agent.pointing_fallback = false;
    } else {
      const Pose pose{agent.state.position, agent.pointing};
      choice = pointing_policy(pose, world.pois, agent.sensor, world.target_center);
      agent.pointing = choice.pointing;
      agent.pointing_fallback = !choice.target_poi.has_value();
    }
    choices.push_back(std::move(choice));
  }
  if (hooks) {
    for (AgentState& agent : world.agents) {
      hooks->perturb_pointing(agent, world.time);
    }
  }
  for (AgentState& agent : world.agents) {
    agent.sensor.degradation = hooks ? hooks->degradation(agent.id, world.time) : 1.0;
  }
  return choices;
}

TickRecord world_evaluate(const WorldState& world, const SimParams& params) {
  TickRecord rec;
  rec.t = world.time;
  auto sensors = agent_sensors(world);
  CostEvaluation ev =
      evaluate_cost_detailed(world.pois, sensors, world.target_center, params.parallel);
  rec.cost = std::move(ev.breakdown);
  rec.visible = std::move(ev.visible);
  return rec;
}

void world_accumulate(WorldState& world, const SimParams& params) {
  accumulate_observations(world.pois, agent_sensors(world), world.target_center, params.dt,
                          params.rate_scale);
}

TickRecord world_tick(WorldState& world, const SimParams& params, TickPerturbation* hooks,
                      bool first) {
  world_propagate(world, params, hooks, first);
  std::vector<PointingChoice> choices = world_point(world, params, hooks);
  TickRecord rec = world_evaluate(world, params);
  rec.pointing = std::move(choices);
  world_accumulate(world, params);
  return rec;
}

WindowPrediction predict_nominal(const WorldState& snapshot, const SimParams& params,
                                 std::size_t ticks, std::size_t diag_every) {
  WindowPrediction pred;
  pred.start = snapshot.time;

  WorldState twin = snapshot;
  for (AgentState& agent : twin.agents) {
    agent.sensor.degradation = 1.0;
  }

  for (std::size_t j = 0; j <= ticks; ++j) {
    world_propagate(twin, params, nullptr, j == 0);
    std::vector<PointingChoice> choices = world_point(twin, params, nullptr);

    std::vector<Vec3> plan;
    plan.reserve(twin.agents.size());
    for (const AgentState& a : twin.agents) {
      plan.push_back(a.pointing);
    }
    pred.plan_pointing.push_back(std::move(plan));

    const bool diag = diag_every > 0 && j % diag_every == 0;
    if (diag) {
      TwinSnapshot snap;
      snap.t = twin.time;
      snap.pois = twin.pois;
      snap.agents = twin.agents;
      pred.diag_snapshots.push_back(std::move(snap));
    }

    TickRecord rec = world_evaluate(twin, params);
    pred.times.push_back(rec.t);
    pred.h_global.push_back(rec.cost.global_cost);
    std::vector<double> per_agent;
    per_agent.reserve(twin.agents.size());
    for (const AgentState& a : twin.agents) {
      per_agent.push_back(rec.cost.agent_contributions.at(a.id));
    }
    pred.h_agent.push_back(std::move(per_agent));

    if (diag) {
      pred.diag_times.push_back(rec.t);
      pred.diag_visible.push_back(rec.visible);
      std::vector<std::optional<int>> targets;
      targets.reserve(choices.size());
      for (const PointingChoice& c : choices) {
        targets.push_back(c.target_poi);
      }
      pred.diag_target.push_back(std::move(targets));
    }

    world_accumulate(twin, params);
  }
  return pred;
}

}  // namespace inspectfdi
