#include <benchmark/benchmark.h>

#include "inspectfdi/dynamics.hpp"
#include "inspectfdi/fdi.hpp"
#include "inspectfdi/info_cost.hpp"
#include "inspectfdi/rng.hpp"

namespace {

using namespace inspectfdi;

std::vector<AgentSensor> make_agents(std::size_t n) {
  std::vector<AgentSensor> agents;
  RngStream rng(7);
  for (std::size_t i = 0; i < n; ++i) {
    AgentSensor a;
    a.id = static_cast<int>(i) + 1;
    a.pose.position =
        Vec3(rng.gaussian(), rng.gaussian(), rng.gaussian()).normalized() * 4.0;
    a.pose.pointing = (-a.pose.position).normalized();
    a.sensor.half_angle = 0.35;
    agents.push_back(a);
  }
  return agents;
}

void BM_EvaluateCost(benchmark::State& state) {
  const auto pois = sample_sphere_pois(static_cast<std::size_t>(state.range(0)), 1.0, 42);
  const auto agents = make_agents(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_cost(pois, agents, Vec3::Zero()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_EvaluateCost)->Args({1000, 2})->Args({5000, 5})->Unit(benchmark::kMicrosecond);

void BM_Visibility(benchmark::State& state) {
  const auto pois = sample_sphere_pois(5000, 1.0, 42);
  const auto agents = make_agents(1);
  std::size_t count = 0;
  for (auto _ : state) {
    for (const auto& poi : pois) {
      count += visible(agents[0].pose, poi, agents[0].sensor, Vec3::Zero()) ? 1 : 0;
    }
  }
  benchmark::DoNotOptimize(count);
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_Visibility);

void BM_HcwStep(benchmark::State& state) {
  OrbitParams orbit{0.00113};
  RelativeState s;
  s.position = Eigen::Vector3d(3.0, 0.0, 0.0);
  s.velocity = Eigen::Vector3d(0.0, -2.0 * orbit.mean_motion * 3.0, 0.0);
  double t = 0.0;
  for (auto _ : state) {
    s = hcw_step(s, Eigen::Vector3d::Zero(), t, 1.0, orbit);
    t += 1.0;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_HcwStep);

void BM_AdaptiveThreshold(benchmark::State& state) {
  const auto pois = sample_sphere_pois(2000, 1.0, 42);
  const auto agents = make_agents(4);
  const CostBreakdown base = evaluate_cost(pois, agents, Vec3::Zero());

  AgentWindowRecord rec;
  rec.agent_id = 1;
  rec.h_prev = base.agent_contributions.at(1) * 0.9;
  rec.h_pred = base.agent_contributions.at(1);
  rec.h_actual = base.agent_contributions.at(1) * 1.1;

  FdiConfig cfg;
  auto twin_eval = [&](const Eigen::Vector3d& pointing) -> ThresholdSample {
    auto perturbed = agents;
    perturbed[0].pose.pointing = pointing;
    CostEvaluation ev = evaluate_cost_detailed(pois, perturbed, Vec3::Zero());
    return {ev.breakdown.agent_contributions.at(1), std::move(ev.visible[0])};
  };
  RngStream rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        adaptive_threshold(rec, agents[0].pose.pointing, twin_eval, cfg, rng));
  }
}
BENCHMARK(BM_AdaptiveThreshold)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
