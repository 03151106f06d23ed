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

#ifndef SEMFIELD_BENCH_EVAL_HPP_
#define SEMFIELD_BENCH_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/bench/dataset.hpp"
#include "semfield/bench/env.hpp"
#include "semfield/bench/toy.hpp"
#include "semfield/policy/policy.hpp"

namespace semfield::bench {

struct EvalReport {
  std::string task;
  std::vector<std::uint64_t> seeds;
  std::vector<double> success_rates;  // one per seed
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation across seeds
  int episodes_per_seed = 0;
  std::string config_hash;

  void validate() const;
  std::string to_json() const;
};

// Maps an observation to a raw action chunk (rows x 4). The sample seed is
// derived from (eval seed, episode, timestep), so rollouts are reproducible.
using PolicyFn =
    std::function<Eigen::MatrixXd(const Observation&, std::uint64_t)>;

// Closed-loop evaluation: for each seed, episodes_per_seed rollouts with
// episode seeds derive_seed(seed, episode). The policy is queried every
// replan_every steps and the first replan_every rows of its chunk are
// executed. Success is the task predicate at the episode end.
EvalReport evaluate(const PolicyFn& policy, const TaskSpec& spec,
                    const ObservationConfig& obs_cfg, int episodes_per_seed,
                    const std::vector<std::uint64_t>& seeds, int replan_every,
                    const std::string& config_hash);

// Reference policies. The expert replans from the true pose; the random
// policy draws uniform actions within the actuation caps.
PolicyFn expert_policy(const TaskSpec& spec);
PolicyFn random_policy(const TaskSpec& spec, int horizon);

// Wraps a trained model: applies the toggles to the observation, runs the
// conditioning pathway, samples a normalized action chunk, and converts it
// back to raw units. The model must outlive the returned function.
PolicyFn model_policy(policy::PolicyModel* model, const TaskSpec& spec,
                      const Toggles& toggles, bool deterministic);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_EVAL_HPP_
