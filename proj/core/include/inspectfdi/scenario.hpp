#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "inspectfdi/fault.hpp"
#include "inspectfdi/fdi.hpp"
#include "inspectfdi/world.hpp"

namespace inspectfdi {

enum class ScenarioMode { sphere3d, analytic1dof };
const char* to_string(ScenarioMode mode);

struct AgentInitState {
  RelativeState state;
};
struct AgentInitPro {
  ProParams pro;
};
struct AgentInitAbscissa {
  double x = 0.0;
};

struct AgentConfig {
  int id = 0;
  SensorModel sensor;
  std::variant<AgentInitState, AgentInitPro, AgentInitAbscissa> init;
  double commanded_step = 0.0;  // analytic mode, per tick
};

struct TargetConfig {
  Vec3 center{Vec3::Zero()};
  double radius = 1.0;
  std::size_t poi_count = 0;                   // sampled when > 0
  std::vector<PointOfInterest> explicit_pois;  // alternative to poi_count
  double prior_variance = 1.0;                 // w applied to sampled POIs
  double importance = 1.0;                     // phi applied to sampled POIs
};

/// Small process noise applied to every agent each tick (not a fault);
/// the nominal-perturbation analog of the bounded-disturbance assumption.
struct NominalNoise {
  double position_std = 0.0;
  double velocity_std = 0.0;
};

struct ScenarioConfig {
  int schema_version = 1;
  ScenarioMode mode = ScenarioMode::sphere3d;
  std::uint64_t seed = 0;
  double duration = 0.0;
  double dt = 1.0;
  double rate_scale = 1.0;
  bool parallel = false;
  OrbitParams orbit;
  FdiConfig fdi;  // window resolved at load time (default: 2 orbital periods)
  TargetConfig target;
  std::vector<AnalyticPoi> analytic_pois;  // analytic1dof mode
  std::vector<AgentConfig> agents;
  NominalNoise nominal_noise;
  std::vector<FaultSpec> faults;
  std::filesystem::path output_dir = "out";
};

/// Parses and validates a scenario. Unknown keys, missing required keys,
/// bad types and violated invariants all raise ConfigError naming the
/// offending key. `overrides` are `a.b.c=value` assignments applied to the
/// document before validation (values parsed as JSON, falling back to
/// strings).
ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});
ScenarioConfig parse_config(const std::string& json_text, const std::string& origin,
                            const std::vector<std::string>& overrides = {});

}  // namespace inspectfdi
