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

#include "steer/spline.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace steer {

SplinePlan::SplinePlan(std::vector<double> knot_times,
                       std::vector<ActionVector> knots, double horizon,
                       Interpolation interpolation)
    : knot_times_(std::move(knot_times)),
      knots_(std::move(knots)),
      horizon_(horizon),
      interpolation_(interpolation) {
  const size_t k = knots_.size();
  if (k < 2) throw StructuralError("a plan needs at least two knots");
  if (knot_times_.size() != k) {
    throw StructuralError("knot time count does not match knot count");
  }
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw StructuralError("plan horizon must be positive");
  }
  if (knot_times_.front() != 0.0 || knot_times_.back() != horizon_) {
    throw StructuralError("knot times must span [0, horizon]");
  }
  for (size_t i = 1; i < k; ++i) {
    if (!(knot_times_[i] > knot_times_[i - 1])) {
      throw StructuralError("knot times must be strictly increasing");
    }
  }
  const int dim = knots_.front().size();
  for (const ActionVector& knot : knots_) {
    if (knot.size() != dim) {
      throw StructuralError("knots have inconsistent dimensions");
    }
  }
}

SplinePlan SplinePlan::Uniform(int num_knots, double horizon,
                               const ActionVector& fill,
                               Interpolation interpolation) {
  if (num_knots < 2) throw StructuralError("a plan needs at least two knots");
  std::vector<double> times(num_knots);
  for (int i = 0; i < num_knots; ++i) {
    times[i] = horizon * i / (num_knots - 1);
  }
  // exact endpoint regardless of rounding
  times.back() = horizon;
  return SplinePlan(std::move(times),
                    std::vector<ActionVector>(num_knots, fill), horizon,
                    interpolation);
}

bool SplinePlan::SameShape(const SplinePlan& other) const {
  return NumKnots() == other.NumKnots() && Dim() == other.Dim() &&
         knot_times_ == other.knot_times_;
}

ActionVector EvaluatePlan(const SplinePlan& plan, double t) {
  if (plan.NumKnots() == 0) throw StructuralError("cannot evaluate an empty plan");
  if (!(t >= 0.0)) throw InvalidInputError("plan evaluated at negative time");

  const auto& times = plan.knot_times();
  if (t >= times.back()) return plan.knots().back();

  // first knot strictly after t; t < times.back() so it exists
  auto upper = std::upper_bound(times.begin(), times.end(), t);
  const int hi = static_cast<int>(upper - times.begin());
  const int lo = hi - 1;
  if (plan.interpolation() == Interpolation::kZeroOrderHold || t == times[lo]) {
    return plan.knot(lo);
  }
  const double fraction = (t - times[lo]) / (times[hi] - times[lo]);
  return plan.knot(lo) + fraction * (plan.knot(hi) - plan.knot(lo));
}

double NoiseStdAt(const NoiseSchedule& schedule, double t) {
  if (!(schedule.horizon > 0.0)) return schedule.std_lo;
  const double clamped = std::clamp(t, 0.0, schedule.horizon);
  if (clamped == schedule.horizon) return schedule.std_hi;
  return schedule.std_lo +
         (schedule.std_hi - schedule.std_lo) * clamped / schedule.horizon;
}

SplinePlan ShiftPlan(const SplinePlan& plan, double dt) {
  if (!(dt >= 0.0)) throw InvalidInputError("plan shift must be non-negative");
  std::vector<ActionVector> knots;
  knots.reserve(plan.NumKnots());
  for (double t : plan.knot_times()) {
    knots.push_back(EvaluatePlan(plan, t + dt));
  }
  return SplinePlan(plan.knot_times(), std::move(knots), plan.horizon(),
                    plan.interpolation());
}

}  // namespace steer
