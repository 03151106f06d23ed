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

#ifndef SEMFIELD_POLICY_SCHEDULE_HPP_
#define SEMFIELD_POLICY_SCHEDULE_HPP_

#include <Eigen/Dense>

namespace semfield::policy {

// Variance schedule for the forward noising process. Steps are 1-based:
// t runs from 1 (least noisy) to num_steps().
struct NoiseSchedule {
  Eigen::VectorXd betas;       // beta_t, strictly in (0, 1)
  Eigen::VectorXd alphas;      // 1 - beta_t
  Eigen::VectorXd alpha_bars;  // running product of alphas, strictly decreasing

  int num_steps() const { return static_cast<int>(betas.size()); }
  double beta(int t) const { return betas(t - 1); }
  double alpha(int t) const { return alphas(t - 1); }
  double alpha_bar(int t) const { return alpha_bars(t - 1); }
  // alpha_bar at t-1, defined as 1 when t is the first step.
  double alpha_bar_prev(int t) const {
    return t > 1 ? alpha_bars(t - 2) : 1.0;
  }
};

// Linear interpolation from beta_start to beta_end over `steps` entries.
// Requires 0 < beta_start <= beta_end < 1 and steps >= 1.
NoiseSchedule make_schedule(int steps, double beta_start, double beta_end);

// Forward noising: sqrt(alpha_bar_t) * a0 + sqrt(1 - alpha_bar_t) * eps.
// Shapes of a0 and eps must match; t must be within the schedule.
Eigen::MatrixXd add_noise(const Eigen::MatrixXd& a0, int t,
                          const Eigen::MatrixXd& eps,
                          const NoiseSchedule& sched);

}  // namespace semfield::policy

#endif  // SEMFIELD_POLICY_SCHEDULE_HPP_
