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

#ifndef STEER_TASK_LIBRARY_H_
#define STEER_TASK_LIBRARY_H_

#include <map>
#include <string>
#include <vector>

#include "steer/cost.h"

namespace steer {

// Named weights (w_*) and constants (sigma, alpha, d_thresh, ...) of one task.
using TaskParams = std::map<std::string, double>;

const std::vector<std::string>& KnownTaskIds();

// default weights and constants; throws ConfigError on an unknown id
TaskParams DefaultTaskParams(const std::string& task_id);

// Builds the term list for `task_id`. `overrides` replaces defaults by name;
// unknown names and unknown ids raise ConfigError.
TaskCost AssembleTaskCost(const std::string& task_id,
                          const TaskParams& overrides = {});

// one line per term: label, kind, weight, sites and active constants
std::string DescribeTaskCost(const TaskCost& cost);

// sites a frame must carry before the rules of `cost` run
std::vector<SiteId> RequiredInputSites(const TaskCost& cost);

}  // namespace steer

#endif  // STEER_TASK_LIBRARY_H_
