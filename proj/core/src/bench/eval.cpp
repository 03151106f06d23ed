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

#include "semfield/bench/eval.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "semfield/bench/expert.hpp"
#include "semfield/errors.hpp"
#include "semfield/partition/partition.hpp"
#include "semfield/rng.hpp"

namespace semfield::bench {

void EvalReport::validate() const {
  if (episodes_per_seed < 1) {
    throw std::invalid_argument("report needs at least one episode per seed");
  }
  if (seeds.empty() || seeds.size() != success_rates.size()) {
    throw std::invalid_argument("report seeds and rates are inconsistent");
  }
  for (double r : success_rates) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("success rate outside [0, 1]");
    }
  }
}

std::string EvalReport::to_json() const {
  validate();
  nlohmann::json j;
  j["task"] = task;
  j["seeds"] = seeds;
  j["success_rates"] = success_rates;
  j["mean"] = mean;
  j["std"] = std_dev;
  j["episodes_per_seed"] = episodes_per_seed;
  j["config_hash"] = config_hash;
  return j.dump(2);
}

EvalReport evaluate(const PolicyFn& policy, const TaskSpec& spec,
                    const ObservationConfig& obs_cfg, int episodes_per_seed,
                    const std::vector<std::uint64_t>& seeds, int replan_every,
                    const std::string& config_hash) {
  if (!policy) throw std::invalid_argument("evaluate needs a policy");
  if (episodes_per_seed < 1) {
    throw std::invalid_argument("need at least one episode per seed");
  }
  if (seeds.empty()) throw std::invalid_argument("need at least one seed");
  if (replan_every < 1) {
    throw std::invalid_argument("replan period must be >= 1");
  }

  ToyEnv env(spec, obs_cfg);
  EvalReport report;
  report.task = spec.name;
  report.seeds = seeds;
  report.episodes_per_seed = episodes_per_seed;
  report.config_hash = config_hash;
  for (std::uint64_t seed : seeds) {
    int successes = 0;
    for (int e = 0; e < episodes_per_seed; ++e) {
      const std::uint64_t ep_seed =
          derive_seed(seed, static_cast<std::uint64_t>(e));
      env.reset(ep_seed);
      Eigen::MatrixXd chunk;
      int chunk_row = 0;
      while (!env.done()) {
        if (env.t() % replan_every == 0 || chunk_row >= chunk.rows()) {
          const Observation obs = env.observe();
          chunk = policy(obs, derive_seed(ep_seed,
                                          100 + static_cast<std::uint64_t>(
                                                    env.t())));
          if (chunk.cols() != 4 || chunk.rows() < 1) {
            throw std::invalid_argument("policy returned a malformed chunk");
          }
          chunk_row = 0;
        }
        env.step(chunk.row(chunk_row++));
      }
      if (env.success()) ++successes;
    }
    report.success_rates.push_back(static_cast<double>(successes) /
                                   episodes_per_seed);
  }

  const double n = static_cast<double>(report.success_rates.size());
  report.mean = std::accumulate(report.success_rates.begin(),
                                report.success_rates.end(), 0.0) /
                n;
  double var = 0.0;
  for (double r : report.success_rates) {
    var += (r - report.mean) * (r - report.mean);
  }
  report.std_dev = n > 1.0 ? std::sqrt(var / (n - 1.0)) : 0.0;
  report.validate();
  return report;
}

PolicyFn expert_policy(const TaskSpec& spec) {
  return [spec](const Observation& obs, std::uint64_t) -> Eigen::MatrixXd {
    const ExpertPlan plan = plan_expert(obs.pose_true, spec, obs.t);
    return plan.actions;
  };
}

PolicyFn random_policy(const TaskSpec& spec, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  return [spec, horizon](const Observation&,
                         std::uint64_t seed) -> Eigen::MatrixXd {
    Rng rng(seed);
    Eigen::MatrixXd chunk(horizon, 4);
    for (int h = 0; h < horizon; ++h) {
      chunk(h, 0) = (2.0 * rng.uniform() - 1.0) * spec.max_step;
      chunk(h, 1) = (2.0 * rng.uniform() - 1.0) * spec.max_step;
      chunk(h, 2) = (2.0 * rng.uniform() - 1.0) * spec.max_turn;
      chunk(h, 3) = rng.uniform();
    }
    return chunk;
  };
}

PolicyFn model_policy(policy::PolicyModel* model, const TaskSpec& spec,
                      const Toggles& toggles, bool deterministic) {
  if (model == nullptr) throw std::invalid_argument("model must be non-null");
  return [model, spec, toggles, deterministic](
             const Observation& obs, std::uint64_t seed) -> Eigen::MatrixXd {
    const Eigen::Index n = obs.field.size();
    const Eigen::Index d = obs.field.dim() / 2;
    Eigen::MatrixXd feat_a, feat_b;
    if (toggles.dense_semantic) {
      feat_a = obs.field.features.leftCols(d);
      feat_b = obs.field.features.rightCols(d);
    } else {
      feat_a = Eigen::MatrixXd::Zero(n, d);
      feat_b = Eigen::MatrixXd::Zero(n, d);
    }
    semlift::SemanticField fused;
    fused.points = obs.field.points;
    fused.features = model->fuse_features(feat_a, feat_b);
    fused.timestep = obs.t;

    std::vector<int> assignments(static_cast<std::size_t>(n), 0);
    int k = 1;
    if (toggles.part_refine) {
      k = static_cast<int>(obs.part_indices.size());
      for (std::size_t p = 0; p < obs.part_indices.size(); ++p) {
        for (int idx : obs.part_indices[p]) {
          assignments[static_cast<std::size_t>(idx)] = static_cast<int>(p);
        }
      }
    }
    const partition::LocalFieldSet parts =
        partition::partition_from_assignments(fused, k, assignments);

    condition::RobotState robot{obs.robot};
    const geometry::RigidTransform pose =
        toggles.global_pose_condition ? obs.pose_obs
                                      : geometry::RigidTransform::identity();
    const policy::ConditionBundle bundle =
        model->condition(fused, parts, robot, pose);
    const Eigen::MatrixXd norm =
        model->sample_actions(bundle, seed, deterministic);
    Eigen::MatrixXd raw(norm.rows(), 4);
    for (Eigen::Index h = 0; h < norm.rows(); ++h) {
      raw.row(h) = denormalize_action(Eigen::RowVector4d(norm.row(h)), spec);
    }
    return raw;
  };
}

}  // namespace semfield::bench
