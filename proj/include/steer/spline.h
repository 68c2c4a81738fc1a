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

#ifndef STEER_SPLINE_H_
#define STEER_SPLINE_H_

#include <vector>

#include "steer/types.h"

namespace steer {

enum class Interpolation { kLinear, kZeroOrderHold };

// Knot-parameterized action plan over [0, horizon]. Past the horizon the last
// knot is held.
class SplinePlan {
 public:
  SplinePlan() = default;
  SplinePlan(std::vector<double> knot_times, std::vector<ActionVector> knots,
             double horizon,
             Interpolation interpolation = Interpolation::kLinear);

  // K knots spaced uniformly over [0, horizon], all equal to `fill`
  static SplinePlan Uniform(int num_knots, double horizon,
                            const ActionVector& fill,
                            Interpolation interpolation = Interpolation::kLinear);

  int NumKnots() const { return static_cast<int>(knots_.size()); }
  int Dim() const { return knots_.empty() ? 0 : knots_.front().size(); }
  double horizon() const { return horizon_; }
  Interpolation interpolation() const { return interpolation_; }
  const std::vector<double>& knot_times() const { return knot_times_; }
  const std::vector<ActionVector>& knots() const { return knots_; }
  ActionVector& knot(int i) { return knots_[i]; }
  const ActionVector& knot(int i) const { return knots_[i]; }

  bool SameShape(const SplinePlan& other) const;

 private:
  std::vector<double> knot_times_;
  std::vector<ActionVector> knots_;
  double horizon_ = 0.0;
  Interpolation interpolation_ = Interpolation::kLinear;
};

// Linearly ramped per-knot standard deviation over the horizon.
struct NoiseSchedule {
  double std_lo = 0.02;
  double std_hi = 0.6;
  double horizon = 1.5;
};

ActionVector EvaluatePlan(const SplinePlan& plan, double t);

// std_lo + (std_hi - std_lo) * t / horizon, with t clamped to [0, horizon]
double NoiseStdAt(const NoiseSchedule& schedule, double t);

// Plan whose knot k is the old plan evaluated at knot_times[k] + dt.
SplinePlan ShiftPlan(const SplinePlan& plan, double dt);

}  // namespace steer

#endif  // STEER_SPLINE_H_
