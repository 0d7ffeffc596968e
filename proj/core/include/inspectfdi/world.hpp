#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "inspectfdi/dynamics.hpp"
#include "inspectfdi/fdi.hpp"
#include "inspectfdi/info_cost.hpp"

namespace inspectfdi {

struct AgentState {
  int id = 0;
  RelativeState state;
  Vec3 pointing{Vec3::UnitX()};
  SensorModel sensor;
  bool pointing_fallback = false;  // last policy call found no facing POI
};

struct WorldState {
  double time = 0.0;
  Vec3 target_center{Vec3::Zero()};
  double target_radius = 1.0;
  std::vector<PointOfInterest> pois;
  std::vector<AgentState> agents;
};

struct SimParams {
  double dt = 1.0;
  OrbitParams orbit;
  double rate_scale = 1.0;
  bool parallel = false;
};

/// Per-tick fault application; the twin runs with no hooks.
class TickPerturbation {
 public:
  virtual ~TickPerturbation() = default;
  virtual void perturb_state(AgentState&, double) {}
  virtual void perturb_pointing(AgentState&, double) {}
  virtual double degradation(int /*agent_id*/, double /*t*/) { return 1.0; }
};

struct TickRecord {
  double t = 0.0;
  CostBreakdown cost;
  std::vector<std::vector<int>> visible;   // per agent, input order
  std::vector<PointingChoice> pointing;    // per agent
};

/// Tick phases. A full tick is propagate -> point -> evaluate ->
/// accumulate; the runner snapshots the world for the twin between the
/// first two and interleaves FDI between the last two.
/// world_propagate advances the dynamics (skipped when `first`) and
/// applies state faults; world_point sets each agent's pointing either
/// from the live max-variance policy (plan = nullptr, used by the twin
/// planner) or from a precomputed per-agent plan (the assignment-phase
/// pointing executed by the real run), then applies pointing faults and
/// degradations.
void world_propagate(WorldState& world, const SimParams& params, TickPerturbation* hooks,
                     bool first);
std::vector<PointingChoice> world_point(WorldState& world, const SimParams& params,
                                        TickPerturbation* hooks,
                                        const std::vector<Vec3>* plan = nullptr);
TickRecord world_evaluate(const WorldState& world, const SimParams& params);
void world_accumulate(WorldState& world, const SimParams& params);

/// One full simulation tick under the live policy. Deterministic given
/// the world state and hooks.
TickRecord world_tick(WorldState& world, const SimParams& params, TickPerturbation* hooks,
                      bool first);

std::vector<AgentSensor> agent_sensors(const WorldState& world);

struct TwinSnapshot {
  double t = 0.0;
  std::vector<PointOfInterest> pois;
  std::vector<AgentState> agents;
};

/// Fault-free look-ahead from a window anchor. Index alignment: entry j of
/// the per-tick vectors corresponds to the anchor tick + j.
struct WindowPrediction {
  double start = 0.0;
  std::vector<double> times;
  std::vector<double> h_global;
  std::vector<std::vector<double>> h_agent;        // [tick][agent index]
  std::vector<std::vector<Vec3>> plan_pointing;    // [tick][agent]: assignment plan
  // Diagnostic-tick data (every diag_every ticks, starting at the anchor):
  std::vector<double> diag_times;
  std::vector<std::vector<std::vector<int>>> diag_visible;   // [diag][agent]
  std::vector<std::vector<std::optional<int>>> diag_target;  // policy targets
  std::vector<TwinSnapshot> diag_snapshots;                  // pre-evaluation state
};

/// Runs the nominal twin over `ticks` steps from `snapshot` (degradations
/// reset to 1, no fault hooks), producing the per-tick pointing plan the
/// real run executes alongside the predicted contributions and visible
/// sets. The twin is bit-identical to a real run with no injected faults.
/// diag_every is the diagnostic cadence in ticks.
WindowPrediction predict_nominal(const WorldState& snapshot, const SimParams& params,
                                 std::size_t ticks, std::size_t diag_every);

}  // namespace inspectfdi
