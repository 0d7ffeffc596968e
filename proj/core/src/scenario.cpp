#include "inspectfdi/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "inspectfdi/errors.hpp"

namespace inspectfdi {

using nlohmann::json;

const char* to_string(ScenarioMode mode) {
  return mode == ScenarioMode::sphere3d ? "sphere3d" : "analytic1dof";
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at '" + path + "': " + what);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    fail(path, "expected an object");
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) fail(path + "." + key, "missing required key");
  if (!v->is_number()) fail(path + "." + key, "expected a number");
  return v->get<double>();
}

double get_number_or(const json& obj, const std::string& path, const std::string& key,
                     double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(path + "." + key, "expected a number");
  return v->get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) fail(path + "." + key, "missing required key");
  if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
  return v->get<std::int64_t>();
}

bool get_bool_or(const json& obj, const std::string& path, const std::string& key,
                 bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(path + "." + key, "expected a boolean");
  return v->get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key) {
  const json* v = find(obj, key);
  if (!v) fail(path + "." + key, "missing required key");
  if (!v->is_string()) fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

Vec3 get_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    fail(path, "expected an array of 3 numbers");
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Vec3 get_vec3_or(const json& obj, const std::string& path, const std::string& key,
                 const Vec3& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  return get_vec3(*v, path + "." + key);
}

FdiConfig parse_fdi(const json* obj, const std::string& path) {
  FdiConfig cfg;
  cfg.window = 0.0;  // resolved by the caller when absent
  if (!obj) return cfg;
  require_keys(*obj, path,
               {"window", "tick", "epsilon_deg", "threshold_samples", "epsilon_nom",
                "tau_floor", "degeneracy_floor_scale", "global_delta_threshold",
                "global_absolute"});
  cfg.window = get_number_or(*obj, path, "window", 0.0);
  cfg.tick = get_number_or(*obj, path, "tick", 10.0);
  cfg.epsilon = get_number_or(*obj, path, "epsilon_deg", 2.0) * kDegToRad;
  const json* samples = find(*obj, "threshold_samples");
  if (samples) {
    if (!samples->is_number_integer() || samples->get<std::int64_t>() < 1) {
      fail(path + ".threshold_samples", "expected an integer >= 1");
    }
    cfg.threshold_samples = static_cast<int>(samples->get<std::int64_t>());
  }
  cfg.epsilon_nom = get_number_or(*obj, path, "epsilon_nom", 1e-9);
  if (cfg.epsilon_nom < 0.0) fail(path + ".epsilon_nom", "must be >= 0");
  cfg.tau_floor = get_number_or(*obj, path, "tau_floor", 0.05);
  if (!(cfg.tau_floor > 0.0)) fail(path + ".tau_floor", "must be > 0");
  cfg.degeneracy_floor_scale = get_number_or(*obj, path, "degeneracy_floor_scale", 1e-12);
  const json* gdt = find(*obj, "global_delta_threshold");
  if (gdt) {
    if (!gdt->is_number()) fail(path + ".global_delta_threshold", "expected a number");
    cfg.global_delta_threshold = gdt->get<double>();
  }
  cfg.global_absolute = get_bool_or(*obj, path, "global_absolute", false);
  return cfg;
}

SensorModel parse_sensor(const json& obj, const std::string& path) {
  require_keys(obj, path, {"half_angle_deg", "variance_gain"});
  SensorModel sensor;
  sensor.half_angle = get_number_or(obj, path, "half_angle_deg", 20.0) * kDegToRad;
  if (!(sensor.half_angle > 0.0 && sensor.half_angle < std::numbers::pi)) {
    fail(path + ".half_angle_deg", "must be in (0, 180)");
  }
  sensor.variance_gain = get_number_or(obj, path, "variance_gain", 1.0);
  if (!(sensor.variance_gain > 0.0)) fail(path + ".variance_gain", "must be > 0");
  return sensor;
}

AgentConfig parse_agent(const json& obj, const std::string& path, ScenarioMode mode) {
  require_keys(obj, path, {"id", "sensor", "init", "step"});
  AgentConfig agent;
  agent.id = static_cast<int>(get_integer(obj, path, "id"));
  if (agent.id < 0) fail(path + ".id", "must be >= 0");
  const json* sensor = find(obj, "sensor");
  if (sensor) {
    agent.sensor = parse_sensor(*sensor, path + ".sensor");
  }
  const json* init = find(obj, "init");
  if (!init) fail(path + ".init", "missing required key");
  require_keys(*init, path + ".init", {"state", "pro", "x"});
  const json* state = find(*init, "state");
  const json* pro = find(*init, "pro");
  const json* x = find(*init, "x");
  const int provided = (state ? 1 : 0) + (pro ? 1 : 0) + (x ? 1 : 0);
  if (provided != 1) {
    fail(path + ".init", "exactly one of state / pro / x required");
  }
  if (mode == ScenarioMode::analytic1dof) {
    if (!x) fail(path + ".init", "analytic1dof agents need init.x");
    if (!x->is_number()) fail(path + ".init.x", "expected a number");
    agent.init = AgentInitAbscissa{x->get<double>()};
    agent.commanded_step = get_number_or(obj, path, "step", 0.0);
  } else {
    if (x) fail(path + ".init.x", "abscissa init is analytic1dof-only");
    if (find(obj, "step")) fail(path + ".step", "commanded steps are analytic1dof-only");
    if (state) {
      require_keys(*state, path + ".init.state", {"position", "velocity"});
      AgentInitState s;
      s.state.position = get_vec3_or(*state, path + ".init.state", "position", Vec3::Zero());
      s.state.velocity = get_vec3_or(*state, path + ".init.state", "velocity", Vec3::Zero());
      agent.init = s;
    } else {
      require_keys(*pro, path + ".init.pro",
                   {"radial_amplitude", "phase_deg", "along_track_offset", "cross_amplitude",
                    "cross_phase_deg"});
      AgentInitPro p;
      p.pro.radial_amplitude = get_number(*pro, path + ".init.pro", "radial_amplitude");
      p.pro.phase = get_number_or(*pro, path + ".init.pro", "phase_deg", 0.0) * kDegToRad;
      p.pro.along_track_offset =
          get_number_or(*pro, path + ".init.pro", "along_track_offset", 0.0);
      p.pro.cross_amplitude = get_number_or(*pro, path + ".init.pro", "cross_amplitude", 0.0);
      p.pro.cross_phase =
          get_number_or(*pro, path + ".init.pro", "cross_phase_deg", 0.0) * kDegToRad;
      agent.init = p;
    }
  }
  return agent;
}

TargetConfig parse_target(const json& obj, const std::string& path) {
  require_keys(obj, path,
               {"center", "radius", "poi_count", "pois", "prior_variance", "importance",
                "poi_seed"});
  TargetConfig target;
  target.center = get_vec3_or(obj, path, "center", Vec3::Zero());
  target.radius = get_number_or(obj, path, "radius", 1.0);
  if (!(target.radius > 0.0)) fail(path + ".radius", "must be > 0");
  target.prior_variance = get_number_or(obj, path, "prior_variance", 1.0);
  if (!(target.prior_variance > 0.0)) fail(path + ".prior_variance", "must be > 0");
  target.importance = get_number_or(obj, path, "importance", 1.0);
  if (target.importance < 0.0 || target.importance > 1.0) {
    fail(path + ".importance", "must be in [0, 1]");
  }
  const json* count = find(obj, "poi_count");
  const json* pois = find(obj, "pois");
  if ((count == nullptr) == (pois == nullptr)) {
    fail(path, "exactly one of poi_count / pois required");
  }
  if (count) {
    if (!count->is_number_integer() || count->get<std::int64_t>() < 1) {
      fail(path + ".poi_count", "expected an integer >= 1");
    }
    target.poi_count = static_cast<std::size_t>(count->get<std::int64_t>());
  } else {
    if (!pois->is_array() || pois->empty()) {
      fail(path + ".pois", "expected a non-empty array");
    }
    std::size_t index = 0;
    for (const json& p : *pois) {
      const std::string ppath = path + ".pois[" + std::to_string(index++) + "]";
      require_keys(p, ppath, {"location", "importance", "prior_variance"});
      PointOfInterest poi;
      const json* loc = find(p, "location");
      if (!loc) fail(ppath + ".location", "missing required key");
      poi.location = get_vec3(*loc, ppath + ".location");
      poi.importance = get_number_or(p, ppath, "importance", target.importance);
      if (poi.importance < 0.0 || poi.importance > 1.0) {
        fail(ppath + ".importance", "must be in [0, 1]");
      }
      poi.prior_variance = get_number_or(p, ppath, "prior_variance", target.prior_variance);
      if (!(poi.prior_variance > 0.0)) fail(ppath + ".prior_variance", "must be > 0");
      target.explicit_pois.push_back(poi);
    }
  }
  return target;
}

std::vector<AnalyticPoi> parse_analytic(const json& obj, const std::string& path) {
  require_keys(obj, path, {"pois"});
  const json* pois = find(obj, "pois");
  if (!pois || !pois->is_array() || pois->empty()) {
    fail(path + ".pois", "expected a non-empty array");
  }
  std::vector<AnalyticPoi> out;
  std::size_t index = 0;
  for (const json& p : *pois) {
    const std::string ppath = path + ".pois[" + std::to_string(index++) + "]";
    require_keys(p, ppath, {"s", "importance", "inverse_prior"});
    const json* s = find(p, "s");
    if (!s || !s->is_array() || s->size() != 2 || !(*s)[0].is_number() ||
        !(*s)[1].is_number()) {
      fail(ppath + ".s", "expected an array of 2 numbers");
    }
    AnalyticPoi poi;
    poi.sx = (*s)[0].get<double>();
    poi.sy = (*s)[1].get<double>();
    poi.importance = get_number_or(p, ppath, "importance", 1.0);
    if (poi.importance < 0.0 || poi.importance > 1.0) {
      fail(ppath + ".importance", "must be in [0, 1]");
    }
    poi.inverse_prior = get_number_or(p, ppath, "inverse_prior", 0.0);
    if (poi.inverse_prior < 0.0) fail(ppath + ".inverse_prior", "must be >= 0");
    out.push_back(poi);
  }
  return out;
}

FaultSpec parse_fault(const json& obj, const std::string& path, std::size_t index,
                      ScenarioMode mode) {
  require_keys(obj, path,
               {"id", "agent_id", "kind", "start_time", "position_bias", "velocity_bias",
                "position_noise_std", "velocity_noise_std", "step_bias", "step_noise_std",
                "angle_deg", "axis", "beta", "seed"});
  FaultSpec spec;
  const json* id = find(obj, "id");
  if (id) {
    if (!id->is_string()) fail(path + ".id", "expected a string");
    spec.id = id->get<std::string>();
  } else {
    spec.id = "fault" + std::to_string(index);
  }
  spec.agent_id = static_cast<int>(get_integer(obj, path, "agent_id"));
  const std::string kind = get_string(obj, path, "kind");
  const auto parsed_kind = fault_kind_from_string(kind);
  if (!parsed_kind) fail(path + ".kind", "unknown fault kind '" + kind + "'");
  spec.kind = *parsed_kind;
  spec.start_time = get_number_or(obj, path, "start_time", 0.0);
  spec.position_bias = get_vec3_or(obj, path, "position_bias", Vec3::Zero());
  spec.velocity_bias = get_vec3_or(obj, path, "velocity_bias", Vec3::Zero());
  spec.position_noise_std = get_number_or(obj, path, "position_noise_std", 0.0);
  spec.velocity_noise_std = get_number_or(obj, path, "velocity_noise_std", 0.0);
  spec.step_bias = get_number_or(obj, path, "step_bias", 0.0);
  spec.step_noise_std = get_number_or(obj, path, "step_noise_std", 0.0);
  const double default_angle = spec.kind == FaultKind::sensor_blackout ? 180.0 : 0.0;
  spec.misalignment_angle = get_number_or(obj, path, "angle_deg", default_angle) * kDegToRad;
  const json* axis = find(obj, "axis");
  if (axis) {
    spec.misalignment_axis = get_vec3(*axis, path + ".axis");
  }
  spec.beta = get_number_or(obj, path, "beta", 1.0);
  const json* seed = find(obj, "seed");
  if (seed) {
    if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
      fail(path + ".seed", "expected an integer");
    }
    spec.seed = seed->get<std::uint64_t>();
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  if (mode == ScenarioMode::analytic1dof &&
      (spec.kind == FaultKind::actuator_pointing || spec.kind == FaultKind::sensor_blackout)) {
    fail(path + ".kind", "pointing faults are sphere3d-only");
  }
  return spec;
}

json parse_override_value(const std::string& text) {
  const json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    return json(text);  // plain string value
  }
  return parsed;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key_path = assignment.substr(0, eq);
  const json value = parse_override_value(assignment.substr(eq + 1));

  json* node = &doc;
  std::stringstream keys(key_path);
  std::string key;
  std::vector<std::string> parts;
  while (std::getline(keys, key, '.')) {
    if (key.empty()) {
      throw ConfigError("override '" + assignment + "' has an empty key segment");
    }
    parts.push_back(key);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text, const std::string& origin,
                            const std::vector<std::string>& overrides) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ConfigError("config error at '" + origin + "': not valid JSON");
  }
  for (const std::string& ov : overrides) {
    apply_override(doc, ov);
  }
  require_keys(doc, "",
               {"schema_version", "mode", "seed", "duration", "dt", "rate_scale", "parallel",
                "orbit", "fdi", "target", "analytic", "agents", "nominal_noise", "faults",
                "output_dir"});

  ScenarioConfig cfg;
  if (get_integer(doc, "", "schema_version") != 1) {
    fail("schema_version", "unsupported version (expected 1)");
  }
  const std::string mode = get_string(doc, "", "mode");
  if (mode == "sphere3d") {
    cfg.mode = ScenarioMode::sphere3d;
  } else if (mode == "analytic1dof") {
    cfg.mode = ScenarioMode::analytic1dof;
  } else {
    fail("mode", "expected sphere3d or analytic1dof");
  }
  const json* seed = find(doc, "seed");
  if (!seed || (!seed->is_number_unsigned() && !seed->is_number_integer())) {
    fail("seed", "expected an integer");
  }
  cfg.seed = seed->get<std::uint64_t>();
  cfg.duration = get_number(doc, "", "duration");
  if (!(cfg.duration > 0.0)) fail("duration", "must be > 0");
  cfg.dt = get_number_or(doc, "", "dt", 1.0);
  if (!(cfg.dt > 0.0)) fail("dt", "must be > 0");
  cfg.rate_scale = get_number_or(doc, "", "rate_scale", 1.0);
  if (cfg.rate_scale < 0.0) fail("rate_scale", "must be >= 0");
  cfg.parallel = get_bool_or(doc, "", "parallel", false);

  const json* orbit = find(doc, "orbit");
  if (cfg.mode == ScenarioMode::sphere3d) {
    if (!orbit) fail("orbit", "missing required key");
    require_keys(*orbit, "orbit", {"mean_motion"});
    cfg.orbit.mean_motion = get_number(*orbit, "orbit", "mean_motion");
    if (!(cfg.orbit.mean_motion > 0.0)) fail("orbit.mean_motion", "must be > 0");
  } else if (orbit) {
    fail("orbit", "analytic1dof has no orbit");
  }

  cfg.fdi = parse_fdi(find(doc, "fdi"), "fdi");
  if (cfg.fdi.window == 0.0) {
    // Default: two orbital periods, rounded onto the tick grid.
    const double window = cfg.mode == ScenarioMode::sphere3d
                              ? 2.0 * (2.0 * std::numbers::pi / cfg.orbit.mean_motion)
                              : cfg.duration;
    cfg.fdi.window = std::max(1.0, std::round(window / cfg.dt)) * cfg.dt;
  }
  if (cfg.mode == ScenarioMode::analytic1dof) {
    cfg.fdi.tick = cfg.dt;  // the planar metric is per step
  }
  if (!(cfg.fdi.window > 0.0)) fail("fdi.window", "must be > 0");
  if (cfg.dt > cfg.fdi.window) fail("dt", "must be <= fdi.window");
  if (!(cfg.fdi.tick > 0.0)) fail("fdi.tick", "must be > 0");
  if (cfg.fdi.tick > cfg.fdi.window) fail("fdi.tick", "must be <= fdi.window");

  auto near_multiple = [](double value, double quantum) {
    const double ratio = value / quantum;
    return std::abs(ratio - std::round(ratio)) < 1e-9;
  };
  if (!near_multiple(cfg.fdi.tick, cfg.dt)) {
    fail("fdi.tick", "must be a multiple of dt");
  }
  if (!near_multiple(cfg.fdi.window, cfg.dt)) {
    fail("fdi.window", "must be a multiple of dt");
  }

  const json* target = find(doc, "target");
  const json* analytic = find(doc, "analytic");
  if (cfg.mode == ScenarioMode::sphere3d) {
    if (!target) fail("target", "missing required key");
    if (analytic) fail("analytic", "sphere3d has no analytic block");
    cfg.target = parse_target(*target, "target");
  } else {
    if (!analytic) fail("analytic", "missing required key");
    if (target) fail("target", "analytic1dof has no target block");
    cfg.analytic_pois = parse_analytic(*analytic, "analytic");
  }

  const json* agents = find(doc, "agents");
  if (!agents || !agents->is_array() || agents->empty()) {
    fail("agents", "expected a non-empty array");
  }
  std::set<int> agent_ids;
  std::size_t index = 0;
  for (const json& a : *agents) {
    const std::string apath = "agents[" + std::to_string(index++) + "]";
    AgentConfig agent = parse_agent(a, apath, cfg.mode);
    if (!agent_ids.insert(agent.id).second) {
      fail(apath + ".id", "duplicate agent id " + std::to_string(agent.id));
    }
    cfg.agents.push_back(std::move(agent));
  }

  const json* noise = find(doc, "nominal_noise");
  if (noise) {
    require_keys(*noise, "nominal_noise", {"position_std", "velocity_std"});
    cfg.nominal_noise.position_std = get_number_or(*noise, "nominal_noise", "position_std", 0.0);
    cfg.nominal_noise.velocity_std = get_number_or(*noise, "nominal_noise", "velocity_std", 0.0);
    if (cfg.nominal_noise.position_std < 0.0 || cfg.nominal_noise.velocity_std < 0.0) {
      fail("nominal_noise", "stds must be >= 0");
    }
  }

  const json* faults = find(doc, "faults");
  if (faults) {
    if (!faults->is_array()) fail("faults", "expected an array");
    std::set<std::pair<int, FaultKind>> seen;
    std::set<std::string> fault_ids;
    std::size_t findex = 0;
    for (const json& f : *faults) {
      const std::string fpath = "faults[" + std::to_string(findex) + "]";
      FaultSpec spec = parse_fault(f, fpath, findex, cfg.mode);
      ++findex;
      if (!agent_ids.contains(spec.agent_id)) {
        fail(fpath + ".agent_id", "no such agent " + std::to_string(spec.agent_id));
      }
      if (!seen.insert({spec.agent_id, spec.kind}).second) {
        fail(fpath, "duplicate fault kind for agent " + std::to_string(spec.agent_id));
      }
      if (!fault_ids.insert(spec.id).second) {
        fail(fpath + ".id", "duplicate fault id '" + spec.id + "'");
      }
      cfg.faults.push_back(std::move(spec));
    }
  }

  const json* out_dir = find(doc, "output_dir");
  if (out_dir) {
    if (!out_dir->is_string()) fail("output_dir", "expected a string");
    cfg.output_dir = out_dir->get<std::string>();
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config error at '" + path.string() + "': cannot open file");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string(), overrides);
}

}  // namespace inspectfdi
