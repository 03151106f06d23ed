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

#ifndef SEMFIELD_BENCH_EXPERT_HPP_
#define SEMFIELD_BENCH_EXPERT_HPP_

#include <Eigen/Dense>

#include "semfield/bench/toy.hpp"

namespace semfield::bench {

struct ExpertPlan {
  Eigen::MatrixXd actions;  // (episode_len - t0) x 4, raw units
  bool feasible = false;    // the plan provably reaches the success region
};

// Receding-horizon proportional controller: each step closes a fraction of
// the remaining pose error along the shortest rotation, capped by the
// actuation limits, and settles two steps before the episode ends. The
// feasible flag is set by rolling the plan forward and checking the success
// predicate, so a true flag is a guarantee, not a heuristic.
ExpertPlan plan_expert(const PlanarPose& start, const TaskSpec& spec,
                       int t0 = 0);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_EXPERT_HPP_
