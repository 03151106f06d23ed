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

#ifndef SEMFIELD_POLICY_POLICY_HPP_
#define SEMFIELD_POLICY_POLICY_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "semfield/condition/condition.hpp"
#include "semfield/geometry/types.hpp"
#include "semfield/partition/partition.hpp"
#include "semfield/policy/denoiser.hpp"
#include "semfield/policy/schedule.hpp"
#include "semfield/rng.hpp"
#include "semfield/semlift/field.hpp"

namespace semfield::policy {

// Conditioning inputs at value level: the global row and the refined part
// set. Part row order is arbitrary; everything downstream is invariant to
// it.
struct ConditionBundle {
  Eigen::MatrixXd global;  // 1 x global_dim
  Eigen::MatrixXd parts;   // K x part_dim
};

// Noise predictor signature shared by the trained denoiser and test
// oracles: (noisy actions, step, conditions) -> predicted noise.
using DenoiserFn = std::function<Eigen::MatrixXd(
    const Eigen::MatrixXd&, int, const ConditionBundle&)>;

// One reverse-diffusion step: the posterior mean under the predicted noise,
// plus sampling noise for t > 1 unless `deterministic`. `rng` may be null
// only when no noise will be drawn.
Eigen::MatrixXd denoise_step(const DenoiserFn& denoiser,
                             const Eigen::MatrixXd& a_t, int t,
                             const ConditionBundle& c,
                             const NoiseSchedule& sched, Rng* rng,
                             bool deterministic = false);

// Full reverse chain from standard normal noise, deterministic given the
// seed. Output is clipped to +-bound elementwise. Draw order: the initial
// noise matrix first, then one noise matrix after each step with t > 1.
Eigen::MatrixXd sample(const DenoiserFn& denoiser, const ConditionBundle& c,
                       const NoiseSchedule& sched, int horizon,
                       int action_dim, double bound, std::uint64_t seed,
                       bool deterministic = false);

// Mean of || eps - eps_hat ||^2 over the batch, with t drawn uniformly from
// the schedule and eps standard normal, in batch order (t first, then eps,
// per item). Evaluation only; no gradients.
double training_loss(
    const DenoiserFn& denoiser,
    const std::vector<std::pair<Eigen::MatrixXd, ConditionBundle>>& batch,
    const NoiseSchedule& sched, std::uint64_t seed);

// One training example: a raw field (points plus both reduced feature
// families, so fusion weights stay trainable), the part index lists, the
// robot state, the tracked object pose, and the expert action chunk.
struct TrainItem {
  Eigen::MatrixXd points;                     // n x 3
  Eigen::MatrixXd feat_a;                     // n x feature_dim
  Eigen::MatrixXd feat_b;                     // n x feature_dim
  std::vector<std::vector<int>> part_indices; // K lists of row indices
  Eigen::VectorXd robot;                      // joint values
  geometry::RigidTransform pose;
  Eigen::MatrixXd actions;                    // horizon x action_dim
};

// The full trainable policy: fusion weights, hierarchical conditioning
// encoders, and the denoiser, plus the frozen noise schedule.
struct PolicyModel {
  PolicyConfig cfg;
  nn::Param alpha, beta;  // 1x1 fusion weights
  condition::HierarchicalConditioner cond;
  ConvDenoiser den;
  NoiseSchedule sched;

  PolicyModel(const PolicyConfig& cfg, Rng& rng);

  double fusion_alpha() const { return alpha.value(0, 0); }
  double fusion_beta() const { return beta.value(0, 0); }
  // alpha * feat_a + beta * feat_b at current weights.
  Eigen::MatrixXd fuse_features(const Eigen::MatrixXd& feat_a,
                                const Eigen::MatrixXd& feat_b) const;

  // Runs the conditioning pathway at value level for inference.
  ConditionBundle condition(const semlift::SemanticField& field,
                            const partition::LocalFieldSet& parts,
                            const condition::RobotState& robot,
                            const geometry::RigidTransform& pose);

  // Differentiable conditioning from a training item; fusion happens on the
  // tape so alpha/beta receive gradients. Returns (global, refined parts).
  std::pair<nn::Var, nn::Var> condition_graph(nn::Tape& t,
                                              const TrainItem& item);

  Eigen::MatrixXd predict(const Eigen::MatrixXd& a_t, int step,
                          const ConditionBundle& c);
  Eigen::MatrixXd sample_actions(const ConditionBundle& c, std::uint64_t seed,
                                 bool deterministic = false);

  void collect(std::vector<nn::Param*>* out);
  void save(const std::string& path);
  void load(const std::string& path);
};

struct TrainMetrics {
  int step = 0;
  double loss = 0.0;
  double lr = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  std::string to_jsonl() const;
};

// Minibatch trainer: per-item tapes whose gradients accumulate in item
// order, one Adam step per batch. Deterministic for a fixed seed and batch
// sequence.
struct Trainer {
  PolicyModel* model;
  nn::Adam opt;
  Rng rng;
  int step = 0;

  Trainer(PolicyModel* model, double lr, std::uint64_t seed);

  TrainMetrics train_step(const std::vector<const TrainItem*>& batch);
};

}  // namespace semfield::policy

#endif  // SEMFIELD_POLICY_POLICY_HPP_
