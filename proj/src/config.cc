// Copyright 2026 The steermpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "steer/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "steer/rng.h"

namespace steer {
namespace {

using json = nlohmann::json;

// Typed access to one JSON object with located error messages.
class Reader {
 public:
  Reader(const json& j, std::string path, const std::string& source,
         const std::string& text)
      : j_(j), path_(std::move(path)), source_(source), text_(text) {
    if (!j_.is_object()) Fail("", "expected an object");
  }

  [[noreturn]] void Fail(const std::string& key, const std::string& msg) const {
    std::string where = source_;
    const int line = key.empty() ? 0 : LineOfKey(text_, key);
    if (line > 0) where += ":" + std::to_string(line);
    const std::string field = path_.empty() ? key
                              : key.empty() ? path_
                                            : path_ + "." + key;
    throw ConfigError(where + ": " + (field.empty() ? "" : field + ": ") + msg);
  }

  // rejects keys outside `allowed`
  void Only(std::initializer_list<const char*> allowed) const {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!ok.count(it.key())) Fail(it.key(), "unknown key");
    }
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  double Num(const std::string& key, double fallback) const {
    if (!Has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) Fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) Fail(key, "expected a finite number");
    return x;
  }

  double Positive(const std::string& key, double fallback) const {
    const double x = Num(key, fallback);
    if (!(x > 0.0)) Fail(key, "must be positive");
    return x;
  }

  int Int(const std::string& key, int fallback, int min) const {
    if (!Has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) Fail(key, "expected an integer");
    const long long x = v.get<long long>();
    if (x < min || x > 1000000000) {
      Fail(key, "must be at least " + std::to_string(min));
    }
    return static_cast<int>(x);
  }

  uint64_t U64(const std::string& key, uint64_t fallback) const {
    if (!Has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      Fail(key, "expected a non-negative integer");
    }
    return v.get<uint64_t>();
  }

  bool Bool(const std::string& key, bool fallback) const {
    if (!Has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) Fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string Str(const std::string& key, const std::string& fallback) const {
    if (!Has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) Fail(key, "expected a string");
    return v.get<std::string>();
  }

  template <int N>
  Eigen::Matrix<double, N, 1> Vec(const std::string& key,
                                  const Eigen::Matrix<double, N, 1>& fallback) const {
    if (!Has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != N) {
      Fail(key, "expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
      if (!v[i].is_number()) Fail(key, "expected numbers");
      out[i] = v[i].get<double>();
    }
    if (!out.allFinite()) Fail(key, "expected finite numbers");
    return out;
  }

  TaskParams Params(const std::string& key) const {
    TaskParams out;
    if (!Has(key)) return out;
    const json& v = j_.at(key);
    if (!v.is_object()) Fail(key, "expected an object of numbers");
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!it.value().is_number()) Fail(it.key(), "expected a number");
      out[it.key()] = it.value().get<double>();
    }
    return out;
  }

  Reader Child(const std::string& key) const {
    static const json kEmpty = json::object();
    const json& v = Has(key) ? j_.at(key) : kEmpty;
    if (!v.is_object()) Fail(key, "expected an object");
    return Reader(v, path_.empty() ? key : path_ + "." + key, source_, text_);
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& source_;
  const std::string& text_;
};

json MovePreset() {
  return json::parse(R"({
    "name": "move",
    "task_id": "move_generic",
    "world": "push",
    "kind": "move",
    "time_limit": 30.0,
    "goal": [2.4, 0.6],
    "layout": {"base": true, "arm": true},
    "init": {"object_center": [1.4, 0.0], "object_radius": 0.25,
             "object_yaw": 0.5, "robot_offset": 0.1, "robot_yaw": 0.2}
  })");
}

json UprightPreset() {
  return json::parse(R"({
    "name": "upright",
    "task_id": "upright_generic",
    "world": "hinge",
    "kind": "upright",
    "time_limit": 30.0,
    "layout": {"base": true, "arm": true},
    "init": {"robot_offset": 0.1, "robot_yaw": 0.2, "theta_max": 0.15,
             "arm": [0.0, 0.0, -0.8, 0.0, 0.0, 0.0]}
  })");
}

void ParseLayout(const Reader& r, TaskConfig* c) {
  r.Only({"base", "arm", "torso", "leg", "gripper"});
  ActionLayout::Flags f;
  f.base = r.Bool("base", true);
  f.arm = r.Bool("arm", true);
  f.torso = r.Bool("torso", false);
  f.leg = r.Bool("leg", false);
  f.gripper = r.Bool("gripper", false);
  try {
    c->layout = ActionLayout(f, BlockBounds{});
  } catch (const LayoutError& e) {
    r.Fail("", e.what());
  }
}

void ParseDefaults(const Reader& r, TaskConfig* c) {
  r.Only({"torso", "arm", "gripper", "gripper_open", "gripper_close"});
  CommandDefaults& d = c->defaults;
  d.default_torso = r.Vec<3>("torso", d.default_torso);
  d.default_arm = r.Vec<6>("arm", d.default_arm);
  d.default_gripper = r.Num("gripper", d.default_gripper);
  d.gripper_open = r.Num("gripper_open", d.gripper_open);
  d.gripper_close = r.Num("gripper_close", d.gripper_close);
}

void ParsePlanner(const Reader& r, TaskConfig* c) {
  r.Only({"samples", "elites", "knots", "horizon", "std_lo", "std_hi",
          "interpolation", "include_nominal", "weighting", "temperature",
          "warm_start", "iterations", "enabled", "period"});
  PlannerSettings& p = c->planner;
  p.cem.num_samples = r.Int("samples", p.cem.num_samples, 1);
  p.cem.num_elites = r.Int("elites", p.cem.num_elites, 1);
  if (p.cem.num_elites > p.cem.num_samples) {
    r.Fail("elites", "must not exceed samples");
  }
  p.num_knots = r.Int("knots", p.num_knots, 2);
  p.horizon = r.Positive("horizon", p.horizon);
  p.cem.noise.std_lo = r.Num("std_lo", p.cem.noise.std_lo);
  p.cem.noise.std_hi = r.Num("std_hi", p.cem.noise.std_hi);
  p.cem.noise.horizon = p.horizon;
  if (!(p.cem.noise.std_lo >= 0.0 && p.cem.noise.std_hi >= p.cem.noise.std_lo)) {
    r.Fail("std_hi", "need 0 <= std_lo <= std_hi");
  }
  const std::string interp = r.Str("interpolation", "linear");
  if (interp == "linear") {
    p.interpolation = Interpolation::kLinear;
  } else if (interp == "zoh") {
    p.interpolation = Interpolation::kZeroOrderHold;
  } else {
    r.Fail("interpolation", "expected \"linear\" or \"zoh\"");
  }
  p.cem.include_nominal = r.Bool("include_nominal", p.cem.include_nominal);
  const std::string weighting = r.Str("weighting", "uniform");
  if (weighting == "uniform") {
    p.cem.weighting = EliteWeighting::kUniform;
  } else if (weighting == "exponential") {
    p.cem.weighting = EliteWeighting::kExponential;
  } else {
    r.Fail("weighting", "expected \"uniform\" or \"exponential\"");
  }
  p.cem.temperature = r.Positive("temperature", p.cem.temperature);
  p.warm_start = r.Bool("warm_start", p.warm_start);
  p.iterations = r.Int("iterations", p.iterations, 1);
  p.enabled = r.Bool("enabled", p.enabled);
  p.period = r.Positive("period", p.period);
}

void ParseRobot(const Reader& r, TaskConfig* c) {
  r.Only({"mass", "yaw_inertia", "arm_inertia", "base_radius", "max_tilt",
          "min_height", "base_accel", "arm_accel", "torso_accel", "gains"});
  RobotParams& p = c->robot;
  p.mass = r.Positive("mass", p.mass);
  p.yaw_inertia = r.Positive("yaw_inertia", p.yaw_inertia);
  p.arm_inertia = r.Positive("arm_inertia", p.arm_inertia);
  p.base_radius = r.Positive("base_radius", p.base_radius);
  p.fall.max_tilt = r.Positive("max_tilt", p.fall.max_tilt);
  p.fall.min_height = r.Positive("min_height", p.fall.min_height);
  p.limits.base = r.Vec<3>("base_accel", p.limits.base);
  p.limits.arm = r.Positive("arm_accel", p.limits.arm);
  p.limits.torso = r.Positive("torso_accel", p.limits.torso);
  const Reader g = r.Child("gains");
  g.Only({"base_vel", "yaw_rate", "arm_kp", "arm_kd", "torso_kp", "torso_kd"});
  TrackingGains& k = c->gains;
  k.base_vel = g.Positive("base_vel", k.base_vel);
  k.yaw_rate = g.Positive("yaw_rate", k.yaw_rate);
  k.arm_kp = g.Positive("arm_kp", k.arm_kp);
  k.arm_kd = g.Num("arm_kd", k.arm_kd);
  k.torso_kp = g.Positive("torso_kp", k.torso_kp);
  k.torso_kd = g.Num("torso_kd", k.torso_kd);
}

void ParseWorldParams(const Reader& r, TaskConfig* c) {
  if (c->world_type == "push") {
    r.Only({"object_radius", "object_mass", "ground_friction",
            "contact_friction", "stiffness", "damping", "gravity", "substeps"});
    PushParams& p = c->push;
    p.object_radius = r.Positive("object_radius", p.object_radius);
    p.object_mass = r.Positive("object_mass", p.object_mass);
    p.ground_friction = r.Num("ground_friction", p.ground_friction);
    p.contact_friction = r.Num("contact_friction", p.contact_friction);
    p.stiffness = r.Positive("stiffness", p.stiffness);
    p.damping = r.Num("damping", p.damping);
    p.gravity = r.Positive("gravity", p.gravity);
    p.substeps = r.Int("substeps", p.substeps, 1);
  } else {
    r.Only({"hinge", "length", "width", "thickness", "mass", "balance_angle",
            "stiffness", "damping", "contact_friction", "hinge_damping",
            "gravity", "substeps"});
    HingeParams& p = c->hinge;
    p.hinge = r.Vec<3>("hinge", p.hinge);
    p.length = r.Positive("length", p.length);
    p.width = r.Positive("width", p.width);
    p.thickness = r.Positive("thickness", p.thickness);
    p.mass = r.Positive("mass", p.mass);
    p.balance_angle = r.Positive("balance_angle", p.balance_angle);
    p.stiffness = r.Positive("stiffness", p.stiffness);
    p.damping = r.Num("damping", p.damping);
    p.contact_friction = r.Num("contact_friction", p.contact_friction);
    p.hinge_damping = r.Num("hinge_damping", p.hinge_damping);
    p.gravity = r.Positive("gravity", p.gravity);
    p.substeps = r.Int("substeps", p.substeps, 1);
  }
}

void ParseInit(const Reader& r, TaskConfig* c) {
  r.Only({"object_center", "object_radius", "object_yaw", "robot_offset",
          "robot_yaw", "theta_max", "arm"});
  InitRandomization& i = c->init;
  i.arm = r.Vec<6>("arm", i.arm);
  i.object_center = r.Vec<2>("object_center", i.object_center);
  i.object_radius = r.Num("object_radius", i.object_radius);
  i.object_yaw = r.Num("object_yaw", i.object_yaw);
  i.robot_offset = r.Num("robot_offset", i.robot_offset);
  i.robot_yaw = r.Num("robot_yaw", i.robot_yaw);
  i.theta_max = r.Num("theta_max", i.theta_max);
  if (i.object_radius < 0 || i.object_yaw < 0 || i.robot_offset < 0 ||
      i.robot_yaw < 0 || i.theta_max < 0) {
    r.Fail("", "randomization ranges must be non-negative");
  }
}

void ParseFilter(const Reader& r, TaskConfig* c) {
  r.Only({"fast_hz", "slow_hz", "slow_every", "ground_truth"});
  c->fast_cutoff_hz = r.Positive("fast_hz", c->fast_cutoff_hz);
  c->slow_cutoff_hz = r.Positive("slow_hz", c->slow_cutoff_hz);
  c->slow_every = r.Int("slow_every", c->slow_every, 1);
  c->ground_truth = r.Bool("ground_truth", c->ground_truth);
}

}  // namespace

int LineOfKey(const std::string& text, const std::string& key) {
  if (text.empty() || key.empty()) return 0;
  const size_t pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

std::vector<std::string> PresetNames() { return {"move", "upright"}; }

json PresetJson(const std::string& name) {
  if (name == "move") return MovePreset();
  if (name == "upright") return UprightPreset();
  throw ConfigError("unknown preset '" + name + "'; valid presets: move, upright");
}

ControllerMode ParseMode(const std::string& mode) {
  if (mode == "hier" || mode == "hierarchical") return ControllerMode::kHierarchical;
  if (mode == "flat") return ControllerMode::kFlat;
  throw ConfigError("unknown mode '" + mode + "'; expected hier or flat");
}

std::string_view ModeName(ControllerMode mode) {
  return mode == ControllerMode::kFlat ? "flat" : "hierarchical";
}

TaskConfig ParseTaskConfig(const json& input, const std::string& source,
                           const std::string& text) {
  json j = input;
  if (!j.is_object()) throw ConfigError(source + ": task must be an object");
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) {
      Reader(j, "", source, text).Fail("preset", "expected a string");
    }
    json base = PresetJson(j["preset"].get<std::string>());
    j.erase("preset");
    base.merge_patch(j);
    j = std::move(base);
  }
  const Reader r(j, "", source, text);
  r.Only({"name", "task_id", "flat_task_id", "world", "kind", "time_limit",
          "goal", "q_upright", "tolerances", "weights", "flat_weights",
          "terminal_only", "layout", "defaults", "planner", "robot",
          "world_params", "init", "filter"});
  TaskConfig c;
  c.source = source;
  c.name = r.Str("name", "task");
  c.cost_id = r.Str("task_id", "");
  if (c.cost_id.empty()) r.Fail("task_id", "missing task_id");
  c.flat_cost_id = r.Str("flat_task_id", c.flat_cost_id);
  c.world_type = r.Str("world", "push");
  if (c.world_type != "push" && c.world_type != "hinge") {
    r.Fail("world", "expected \"push\" or \"hinge\"");
  }
  const std::string kind =
      r.Str("kind", c.world_type == "push" ? "move" : "upright");
  if (kind == "move") {
    c.spec.kind = TaskKind::kMove;
  } else if (kind == "upright") {
    c.spec.kind = TaskKind::kUpright;
  } else {
    r.Fail("kind", "expected \"move\" or \"upright\"");
  }
  c.spec.task_id = c.name;
  c.spec.time_limit = r.Positive("time_limit", c.spec.time_limit);
  c.spec.goal_pos = r.Vec<2>("goal", c.spec.goal_pos);
  c.spec.q_upright = r.Vec<4>("q_upright", c.spec.q_upright);
  {
    const Reader t = r.Child("tolerances");
    t.Only({"pos", "vel", "orient", "angvel"});
    c.spec.pos_tol = t.Positive("pos", c.spec.pos_tol);
    c.spec.vel_tol = t.Positive("vel", c.spec.vel_tol);
    c.spec.orient_tol = t.Positive("orient", c.spec.orient_tol);
    c.spec.angvel_tol = t.Positive("angvel", c.spec.angvel_tol);
  }
  c.weights = r.Params("weights");
  c.flat_weights = r.Params("flat_weights");
  c.terminal_only = r.Bool("terminal_only", false);
  ParseLayout(r.Child("layout"), &c);
  ParseDefaults(r.Child("defaults"), &c);
  ParsePlanner(r.Child("planner"), &c);
  ParseRobot(r.Child("robot"), &c);
  ParseWorldParams(r.Child("world_params"), &c);
  ParseInit(r.Child("init"), &c);
  ParseFilter(r.Child("filter"), &c);

  // resolve the costs now so bad ids and weights surface at load time
  try {
    c.MakeCost(ControllerMode::kHierarchical);
  } catch (const ConfigError& e) {
    r.Fail(c.weights.empty() ? "task_id" : "weights", e.what());
  }
  if (c.spec.kind == TaskKind::kMove) {
    try {
      c.MakeCost(ControllerMode::kFlat);
    } catch (const ConfigError& e) {
      r.Fail("flat_weights", e.what());
    }
  }
  // every site the cost reads must exist in the chosen world
  const std::shared_ptr<const World> world = c.MakeWorld();
  const SiteFrame frame =
      BuildFrame(*world, c.InitialState(*world, 0), c.spec);
  for (SiteId s : RequiredInputSites(c.MakeCost(ControllerMode::kHierarchical))) {
    if (!frame.Has(s)) {
      r.Fail("task_id", "cost '" + c.cost_id + "' reads site '" + SiteName(s) +
                            "' that the " + c.world_type +
                            " world does not provide");
    }
  }
  return c;
}

json ReadJsonFile(const std::string& path, std::string* text) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  *text = buffer.str();
  try {
    return json::parse(*text);
  } catch (const json::parse_error& e) {
    // byte offset to line and column
    const size_t pos = std::min<size_t>(e.byte, text->size());
    const size_t upto = pos > 0 ? pos - 1 : 0;
    const int line =
        1 + static_cast<int>(std::count(text->begin(), text->begin() + upto, '\n'));
    const size_t line_start = text->rfind('\n', upto == 0 ? 0 : upto - 1);
    const size_t column =
        line_start == std::string::npos ? upto + 1 : upto - line_start;
    throw ConfigError(path + ":" + std::to_string(line) + ":" +
                      std::to_string(column) + ": JSON syntax error");
  }
}

TaskConfig LoadTaskFile(const std::string& path) {
  std::string text;
  const json j = ReadJsonFile(path, &text);
  return ParseTaskConfig(j, path, text);
}

TaskConfig ResolveTask(const std::string& name_or_path,
                       const std::string& base_dir) {
  for (const std::string& preset : PresetNames()) {
    if (name_or_path == preset) {
      return ParseTaskConfig(PresetJson(preset), "preset:" + preset);
    }
  }
  std::filesystem::path p(name_or_path);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  if (!std::filesystem::exists(p)) {
    throw ConfigError("unknown task '" + name_or_path +
                      "': not a preset (move, upright) and no such file");
  }
  return LoadTaskFile(p.string());
}

std::shared_ptr<const World> TaskConfig::MakeWorld() const {
  if (world_type == "hinge") {
    return std::make_shared<HingeWorld>(hinge, robot);
  }
  return std::make_shared<PushWorld>(push, robot);
}

TaskCost TaskConfig::MakeCost(ControllerMode mode) const {
  TaskCost cost;
  if (mode == ControllerMode::kFlat) {
    // the move weights carry over to the matching flat terms
    TaskParams params = flat_weights;
    const TaskParams flat_defaults = DefaultTaskParams(flat_cost_id);
    for (const auto& [name, value] : weights) {
      if (flat_defaults.count(name) && !params.count(name)) params[name] = value;
    }
    cost = AssembleTaskCost(flat_cost_id, params);
  } else {
    cost = AssembleTaskCost(cost_id, weights);
  }
  cost.terminal_only = terminal_only;
  return cost;
}

WorldState TaskConfig::InitialState(const World& world, uint64_t seed) const {
  const CounterRng rng(seed);
  auto uniform = [&](uint64_t k, double lo, double hi) {
    return lo + (hi - lo) * rng.Uniform({0x1217, k});
  };
  const Vec3 robot_pose(uniform(0, -init.robot_offset, init.robot_offset),
                        uniform(1, -init.robot_offset, init.robot_offset),
                        uniform(2, -init.robot_yaw, init.robot_yaw));
  WorldState s;
  if (world_type == "hinge") {
    s = static_cast<const HingeWorld&>(world).MakeState(
        robot_pose, uniform(3, 0.0, init.theta_max));
  } else {
    const double r = init.object_radius * std::sqrt(uniform(4, 0.0, 1.0));
    const double a = uniform(5, -std::numbers::pi, std::numbers::pi);
    const Vec3 object(init.object_center.x() + r * std::cos(a),
                      init.object_center.y() + r * std::sin(a),
                      uniform(6, -init.object_yaw, init.object_yaw));
    s = static_cast<const PushWorld&>(world).MakeState(robot_pose, object);
  }
  s.robot.torso = defaults.default_torso;
  s.robot.arm_joints = init.arm;
  s.robot.gripper_pos = s.robot.gripper_target = defaults.default_gripper;
  world.RefreshDerived(&s);
  return s;
}

EpisodeConfig TaskConfig::MakeEpisode(ControllerMode mode,
                                      uint64_t seed) const {
  EpisodeConfig e;
  e.task = spec;
  e.cost = MakeCost(mode);
  e.world = MakeWorld();
  e.policy = std::make_shared<TrackingPolicy>(gains, robot.limits);
  e.layout = layout;
  e.defaults = defaults;
  e.planner = planner;
  e.mode = mode;
  e.initial_state = InitialState(*e.world, seed);
  e.fast_cutoff_hz = fast_cutoff_hz;
  e.slow_cutoff_hz = slow_cutoff_hz;
  e.slow_every = slow_every;
  e.ground_truth = ground_truth;
  e.seed = seed;
  return e;
}

}  // namespace steer
