#include <doctest.h>

#include <cmath>

#include "inspectfdi/world.hpp"

using namespace inspectfdi;

namespace {

WorldState small_world() {
  WorldState world;
  world.target_radius = 1.0;
  world.pois = sample_sphere_pois(80, 1.0, 99);

  for (int id = 1; id <= 2; ++id) {
    AgentState agent;
    agent.id = id;
    ProParams pro;
    pro.radial_amplitude = 3.0 + id;
    pro.phase = id * 1.5;
    agent.state = pro_initial_state(pro, OrbitParams{0.00113});
    agent.pointing = (-agent.state.position).normalized();
    agent.sensor.half_angle = 0.5;
    world.agents.push_back(agent);
  }
  return world;
}

SimParams params() {
  SimParams p;
  p.dt = 1.0;
  p.orbit.mean_motion = 0.00113;
  return p;
}

}  // namespace

TEST_CASE("a hook-free run is bit-identical to its twin prediction") {
  WorldState world = small_world();
  const SimParams p = params();
  const std::size_t ticks = 30;

  const WindowPrediction pred = predict_nominal(world, p, ticks, 10);

  for (std::size_t k = 0; k <= ticks; ++k) {
    world_propagate(world, p, nullptr, k == 0);
    world_point(world, p, nullptr, &pred.plan_pointing[k]);
    const TickRecord rec = world_evaluate(world, p);
    for (std::size_t a = 0; a < world.agents.size(); ++a) {
      CHECK(rec.cost.agent_contributions.at(world.agents[a].id) == pred.h_agent[k][a]);
    }
    CHECK(rec.cost.global_cost == pred.h_global[k]);
    world_accumulate(world, p);
  }
}

TEST_CASE("twin prediction is deterministic") {
  const WorldState world = small_world();
  const SimParams p = params();
  const WindowPrediction a = predict_nominal(world, p, 25, 5);
  const WindowPrediction b = predict_nominal(world, p, 25, 5);
  CHECK(a.h_global == b.h_global);
  CHECK(a.h_agent == b.h_agent);
  CHECK(a.diag_times == b.diag_times);
  REQUIRE(a.plan_pointing.size() == b.plan_pointing.size());
  for (std::size_t k = 0; k < a.plan_pointing.size(); ++k) {
    for (std::size_t i = 0; i < a.plan_pointing[k].size(); ++i) {
      CHECK(a.plan_pointing[k][i] == b.plan_pointing[k][i]);
    }
  }
}

TEST_CASE("twin resets sensor degradation to healthy") {
  WorldState world = small_world();
  world.agents[0].sensor.degradation = 0.5;
  const SimParams p = params();
  const WindowPrediction degraded_snapshot = predict_nominal(world, p, 5, 5);

  WorldState healthy = small_world();
  const WindowPrediction healthy_snapshot = predict_nominal(healthy, p, 5, 5);
  CHECK(degraded_snapshot.h_agent == healthy_snapshot.h_agent);
}

TEST_CASE("world ticks advance time and accumulate information") {
  WorldState world = small_world();
  const SimParams p = params();
  const TickRecord first = world_tick(world, p, nullptr, true);
  CHECK(first.t == 0.0);
  CHECK(world.time == 0.0);
  const TickRecord second = world_tick(world, p, nullptr, false);
  CHECK(second.t == 1.0);
  CHECK(world.time == 1.0);

  double accumulated = 0.0;
  for (const PointOfInterest& poi : world.pois) {
    accumulated += poi.accumulated_information;
  }
  CHECK(accumulated > 0.0);
}
