// Copyright 2026 The Semfield Authors
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

#include "semfield/bench/expert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semfield::bench {

ExpertPlan plan_expert(const PlanarPose& start, const TaskSpec& spec,
                       int t0) {
  spec.validate();
  if (t0 < 0 || t0 > spec.episode_len) {
    throw std::invalid_argument("expert start step out of range");
  }
  const int n = spec.episode_len - t0;
  ExpertPlan plan;
  plan.actions = Eigen::MatrixXd::Zero(n, 4);
  PlanarPose pose = start;
  for (int i = 0; i < n; ++i) {
    const int steps_left = n - i;
    const double denom = std::max(1, steps_left - 2);
    const double ex = spec.target.x - pose.x;
    const double ey = spec.target.y - pose.y;
    const double et = wrap_angle(spec.target.theta - pose.theta);
    const double dx = std::clamp(ex / denom, -spec.max_step, spec.max_step);
    const double dy = std::clamp(ey / denom, -spec.max_step, spec.max_step);
    const double dt = std::clamp(et / denom, -spec.max_turn, spec.max_turn);
    plan.actions.row(i) << dx, dy, dt, 1.0;
    pose.x += dx;
    pose.y += dy;
    pose.theta = wrap_angle(pose.theta + dt);
  }
  plan.feasible = pose_success(pose, spec.target, spec);
  return plan;
}

}  // namespace semfield::bench
