#include "rdrl/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "rdrl/common/strict_json.hpp"

namespace rdrl::cli {
namespace {

void merge_dynamics(const nlohmann::json& j, sim::DynamicsConfig& d, const std::string& ctx) {
  StrictObject o(j, ctx);
  o.get("v_max", d.v_max);
  o.get("a_max", d.a_max);
  o.get("max_steer", d.max_steer);
  o.get("wheelbase", d.wheelbase);
  o.get("sim_dt", d.sim_dt);
  o.get("decisions_per_second", d.decisions_per_second);
  o.finish();
}

void merge_idm(const nlohmann::json& j, sim::IdmParams& p, const std::string& ctx) {
  StrictObject o(j, ctx);
  o.get("desired_speed", p.desired_speed);
  o.get("time_headway", p.time_headway);
  o.get("min_gap", p.min_gap);
  o.get("accel", p.accel);
  o.get("decel", p.decel);
  o.get("exponent", p.exponent);
  o.finish();
}

void merge_reward(const nlohmann::json& j, reward::RewardConfig& r, const std::string& ctx) {
  StrictObject o(j, ctx);
  o.get("ttc_threshold", r.ttc_threshold);
  o.get("safety_weights", r.safety_weights);
  o.get("total_weights", r.total_weights);
  o.get("r_ttc_floor", r.r_ttc_floor);
  o.get("r_lc_floor", r.r_lc_floor);
  o.finish();
}

void merge_geometry(const nlohmann::json& j, env::GeometryConfig& g, const std::string& ctx) {
  StrictObject o(j, ctx);
  if (const auto* c = o.child("roundabout")) {
    StrictObject s(*c, o.path("roundabout"));
    auto& r = g.roundabout;
    s.get("ring_radius", r.ring_radius);
    s.get("lane_width", r.lane_width);
    s.get("leg_length", r.leg_length);
    s.get("connector_radius", r.connector_radius);
    s.get("speed_limit", r.speed_limit);
    s.get("exit_terminal", r.exit_terminal);
    s.finish();
  }
  if (const auto* c = o.child("highway")) {
    StrictObject s(*c, o.path("highway"));
    auto& h = g.highway;
    s.get("lanes", h.lanes);
    s.get("length", h.length);
    s.get("lane_width", h.lane_width);
    s.get("speed_limit", h.speed_limit);
    s.get("terminal", h.terminal);
    s.finish();
  }
  if (const auto* c = o.child("merge")) {
    StrictObject s(*c, o.path("merge"));
    auto& m = g.merge;
    s.get("main_lanes", m.main_lanes);
    s.get("length", m.length);
    s.get("lane_width", m.lane_width);
    s.get("speed_limit", m.speed_limit);
    s.get("ramp_approach", m.ramp_approach);
    s.get("accel_lane", m.accel_lane);
    s.get("taper", m.taper);
    s.get("terminal", m.terminal);
    s.finish();
  }
  o.finish();
}

}  // namespace

void merge_env_json(const nlohmann::json& j, env::EnvConfig& cfg, const std::string& context) {
  StrictObject o(j, context);
  o.get("ambient_vehicles", cfg.ambient_vehicles);
  o.get("observed_vehicles", cfg.observed_vehicles);
  o.get("episode_seconds", cfg.episode_seconds);
  o.get("off_road_factor", cfg.off_road_factor);
  o.get("ego_spawn_distance", cfg.ego_spawn_distance);
  o.get("ego_speed_ratio", cfg.ego_speed_ratio);
  o.get("spawn_clearance", cfg.spawn_clearance);
  o.get("position_scale", cfg.position_scale);
  o.get("meta_speed_step", cfg.meta_speed_step);
  if (const auto* c = o.child("ambient_gains")) {
    StrictObject s(*c, o.path("ambient_gains"));
    s.get("k_d", cfg.ambient_gains.k_d);
    s.get("k_h", cfg.ambient_gains.k_h);
    s.finish();
  }
  o.finish();
}

nlohmann::json env_to_json(const env::EnvConfig& c) {
  return {{"ambient_vehicles", c.ambient_vehicles},
          {"observed_vehicles", c.observed_vehicles},
          {"episode_seconds", c.episode_seconds},
          {"off_road_factor", c.off_road_factor},
          {"ego_spawn_distance", c.ego_spawn_distance},
          {"ego_speed_ratio", c.ego_speed_ratio},
          {"spawn_clearance", c.spawn_clearance},
          {"position_scale", c.position_scale},
          {"meta_speed_step", c.meta_speed_step},
          {"ambient_gains", {{"k_d", c.ambient_gains.k_d}, {"k_h", c.ambient_gains.k_h}}}};
}

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;
  auto& t = cfg.train;
  StrictObject o(j, "config");
  std::string algorithm = std::string(agents::to_string(t.algorithm));
  std::string scenario = std::string(env::to_string(t.env.scenario));
  std::string output_dir = cfg.output_dir.string();
  o.get("algorithm", algorithm);
  o.get("scenario", scenario);
  o.get("seed", t.seed);
  o.get("episodes", t.episodes);
  o.get("output_dir", output_dir);
  try {
    t.algorithm = agents::parse_algorithm(algorithm);
    t.env.scenario = env::parse_scenario(scenario);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.output_dir = output_dir;
  if (const auto* c = o.child("hyperparams")) agents::merge_json(*c, t.hp, o.path("hyperparams"));
  if (const auto* c = o.child("env")) merge_env_json(*c, t.env, o.path("env"));
  if (const auto* c = o.child("dynamics")) merge_dynamics(*c, t.env.dynamics, o.path("dynamics"));
  if (const auto* c = o.child("idm")) merge_idm(*c, t.env.idm, o.path("idm"));
  if (const auto* c = o.child("reward")) merge_reward(*c, t.env.reward, o.path("reward"));
  if (const auto* c = o.child("geometry")) merge_geometry(*c, t.env.geometry, o.path("geometry"));
  o.finish();

  if (t.episodes < 0) throw ConfigError("config.episodes must be >= 0");
  try {
    t.hp.validate();
    env::DrivingEnv probe(t.env);  // validates env, reward, dynamics and geometry together
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  const auto& t = cfg.train;
  const auto& e = t.env;
  const auto& g = e.geometry;
  return {
      {"algorithm", std::string(agents::to_string(t.algorithm))},
      {"scenario", std::string(env::to_string(e.scenario))},
      {"seed", t.seed},
      {"episodes", t.episodes},
      {"output_dir", cfg.output_dir.string()},
      {"hyperparams", agents::to_json(t.hp)},
      {"env", env_to_json(e)},
      {"dynamics",
       {{"v_max", e.dynamics.v_max}, {"a_max", e.dynamics.a_max}, {"max_steer", e.dynamics.max_steer},
        {"wheelbase", e.dynamics.wheelbase}, {"sim_dt", e.dynamics.sim_dt},
        {"decisions_per_second", e.dynamics.decisions_per_second}}},
      {"idm",
       {{"desired_speed", e.idm.desired_speed}, {"time_headway", e.idm.time_headway},
        {"min_gap", e.idm.min_gap}, {"accel", e.idm.accel}, {"decel", e.idm.decel},
        {"exponent", e.idm.exponent}}},
      {"reward",
       {{"ttc_threshold", e.reward.ttc_threshold}, {"safety_weights", e.reward.safety_weights},
        {"total_weights", e.reward.total_weights}, {"r_ttc_floor", e.reward.r_ttc_floor},
        {"r_lc_floor", e.reward.r_lc_floor}}},
      {"geometry",
       {{"roundabout",
         {{"ring_radius", g.roundabout.ring_radius}, {"lane_width", g.roundabout.lane_width},
          {"leg_length", g.roundabout.leg_length}, {"connector_radius", g.roundabout.connector_radius},
          {"speed_limit", g.roundabout.speed_limit}, {"exit_terminal", g.roundabout.exit_terminal}}},
        {"highway",
         {{"lanes", g.highway.lanes}, {"length", g.highway.length}, {"lane_width", g.highway.lane_width},
          {"speed_limit", g.highway.speed_limit}, {"terminal", g.highway.terminal}}},
        {"merge",
         {{"main_lanes", g.merge.main_lanes}, {"length", g.merge.length},
          {"lane_width", g.merge.lane_width}, {"speed_limit", g.merge.speed_limit},
          {"ramp_approach", g.merge.ramp_approach}, {"accel_lane", g.merge.accel_lane},
          {"taper", g.merge.taper}, {"terminal", g.merge.terminal}}}}},
  };
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_json_file(path));
}

std::vector<std::vector<std::pair<std::string, nlohmann::json>>> SweepGrid::combinations() const {
  std::vector<std::vector<std::pair<std::string, nlohmann::json>>> out{{}};
  for (const auto& [name, values] : axes) {
    std::vector<std::vector<std::pair<std::string, nlohmann::json>>> next;
    for (const auto& partial : out)
      for (const auto& v : values) {
        auto c = partial;
        c.emplace_back(name, v);
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

SweepGrid parse_sweep_grid(const nlohmann::json& j) {
  SweepGrid grid;
  StrictObject o(j, "grid");
  o.get("budget_fraction", grid.budget_fraction);
  const auto* params = o.child("parameters");
  o.finish();
  if (!params || !params->is_object() || params->empty())
    throw ConfigError("grid.parameters must be a non-empty object of name -> list");
  for (auto it = params->begin(); it != params->end(); ++it) {
    if (!it->is_array() || it->empty())
      throw ConfigError("grid.parameters." + it.key() + " must be a non-empty list");
    grid.axes.emplace_back(it.key(), std::vector<nlohmann::json>(it->begin(), it->end()));
  }
  if (!(grid.budget_fraction > 0.0 && grid.budget_fraction <= 1.0))
    throw ConfigError("grid.budget_fraction must lie in (0, 1]");
  return grid;
}

void apply_override(nlohmann::json& config, const std::string& dotted, const nlohmann::json& value) {
  nlohmann::json* node = &config["hyperparams"];
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty sweep parameter name");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  (*node)[parts.back()] = value;
}

}  // namespace rdrl::cli
