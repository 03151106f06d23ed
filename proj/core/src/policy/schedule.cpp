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

#include "semfield/policy/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace semfield::policy {

NoiseSchedule make_schedule(int steps, double beta_start, double beta_end) {
  if (steps < 1) {
    throw std::invalid_argument("schedule needs at least one step");
  }
  if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0)) {
    throw std::invalid_argument("betas must satisfy 0 < start <= end < 1");
  }
  NoiseSchedule s;
  if (steps == 1) {
    s.betas = Eigen::VectorXd::Constant(1, beta_start);
  } else {
    s.betas = Eigen::VectorXd::LinSpaced(steps, beta_start, beta_end);
  }
  s.alphas = 1.0 - s.betas.array();
  s.alpha_bars.resize(steps);
  double acc = 1.0;
  for (int i = 0; i < steps; ++i) {
    acc *= s.alphas(i);
    s.alpha_bars(i) = acc;
  }
  return s;
}

Eigen::MatrixXd add_noise(const Eigen::MatrixXd& a0, int t,
                          const Eigen::MatrixXd& eps,
                          const NoiseSchedule& sched) {
  if (t < 1 || t > sched.num_steps()) {
    throw std::invalid_argument("diffusion step out of range");
  }
  if (a0.rows() != eps.rows() || a0.cols() != eps.cols()) {
    throw std::invalid_argument("noise shape does not match actions");
  }
  const double ab = sched.alpha_bar(t);
  return std::sqrt(ab) * a0 + std::sqrt(1.0 - ab) * eps;
}

}  // namespace semfield::policy
