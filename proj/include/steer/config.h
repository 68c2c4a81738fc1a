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

#ifndef STEER_CONFIG_H_
#define STEER_CONFIG_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "steer/episode.h"
#include "steer/policy.h"
#include "steer/task_library.h"
#include "steer/world.h"

namespace steer {

// Seeded initial-condition ranges.
struct InitRandomization {
  Vec2 object_center = Vec2(1.0, 0.0);
  double object_radius = 0.25;  // object offset disk
  double object_yaw = 0.5;      // +- range
  double robot_offset = 0.1;    // +- range per axis
  double robot_yaw = 0.2;       // +- range
  double theta_max = 0.15;      // hinge start angle in [0, theta_max]
  Vec6 arm = Vec6::Zero();      // initial arm joints, not randomized
};

// Everything needed to run one task in either controller mode.
struct TaskConfig {
  std::string name;
  std::string source;  // file or preset the config came from
  std::string cost_id;
  std::string flat_cost_id = "e2e_mpc_move";
  std::string world_type = "push";
  TaskSpec spec;
  TaskParams weights;
  TaskParams flat_weights;
  bool terminal_only = false;
  ActionLayout layout;
  CommandDefaults defaults;
  PlannerSettings planner;
  RobotParams robot;
  TrackingGains gains;
  PushParams push;
  HingeParams hinge;
  InitRandomization init;
  double fast_cutoff_hz = 25.0;
  double slow_cutoff_hz = 15.0;
  int slow_every = 1;
  bool ground_truth = false;

  std::shared_ptr<const World> MakeWorld() const;
  TaskCost MakeCost(ControllerMode mode) const;
  WorldState InitialState(const World& world, uint64_t seed) const;
  EpisodeConfig MakeEpisode(ControllerMode mode, uint64_t seed) const;
};

// built-in task presets: "move" (push world) and "upright" (hinge world)
std::vector<std::string> PresetNames();
nlohmann::json PresetJson(const std::string& name);

// Parses a task object. A "preset" key starts from that preset; the rest
// of the object is merge-patched on top. `source` prefixes error messages.
TaskConfig ParseTaskConfig(const nlohmann::json& j, const std::string& source,
                           const std::string& text = "");
TaskConfig LoadTaskFile(const std::string& path);
// preset name or path to a task file
TaskConfig ResolveTask(const std::string& name_or_path,
                       const std::string& base_dir = "");

// reads and parses a JSON file; syntax errors report file:line:column
nlohmann::json ReadJsonFile(const std::string& path, std::string* text);

// 1-based line of the first occurrence of "key" in `text`, 0 if absent
int LineOfKey(const std::string& text, const std::string& key);

ControllerMode ParseMode(const std::string& mode);
std::string_view ModeName(ControllerMode mode);

}  // namespace steer

#endif  // STEER_CONFIG_H_
