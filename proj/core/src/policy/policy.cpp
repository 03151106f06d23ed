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

#include "semfield/policy/policy.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "semfield/nn/checkpoint.hpp"

namespace semfield::policy {

Eigen::MatrixXd denoise_step(const DenoiserFn& denoiser,
                             const Eigen::MatrixXd& a_t, int t,
                             const ConditionBundle& c,
                             const NoiseSchedule& sched, Rng* rng,
                             bool deterministic) {
  if (t < 1 || t > sched.num_steps()) {
    throw std::invalid_argument("diffusion step out of range");
  }
  const Eigen::MatrixXd eps_hat = denoiser(a_t, t, c);
  if (eps_hat.rows() != a_t.rows() || eps_hat.cols() != a_t.cols()) {
    throw std::invalid_argument("predicted noise shape mismatch");
  }
  const double ab = sched.alpha_bar(t);
  Eigen::MatrixXd mean =
      (a_t - (sched.beta(t) / std::sqrt(1.0 - ab)) * eps_hat) /
      std::sqrt(sched.alpha(t));
  if (t > 1 && !deterministic) {
    if (rng == nullptr) {
      throw std::invalid_argument("stochastic step needs an rng");
    }
    const double var =
        (1.0 - sched.alpha_bar_prev(t)) / (1.0 - ab) * sched.beta(t);
    mean += std::sqrt(var) *
            rng->normal_matrix(static_cast<int>(a_t.rows()),
                               static_cast<int>(a_t.cols()));
  }
  return mean;
}

Eigen::MatrixXd sample(const DenoiserFn& denoiser, const ConditionBundle& c,
                       const NoiseSchedule& sched, int horizon,
                       int action_dim, double bound, std::uint64_t seed,
                       bool deterministic) {
  if (horizon < 1 || action_dim < 1) {
    throw std::invalid_argument("trajectory dims must be positive");
  }
  if (!(bound > 0.0)) {
    throw std::invalid_argument("action bound must be positive");
  }
  Rng rng(seed);
  Eigen::MatrixXd a = rng.normal_matrix(horizon, action_dim);
  for (int t = sched.num_steps(); t >= 1; --t) {
    a = denoise_step(denoiser, a, t, c, sched, &rng, deterministic);
  }
  return a.cwiseMax(-bound).cwiseMin(bound);
}

double training_loss(
    const DenoiserFn& denoiser,
    const std::vector<std::pair<Eigen::MatrixXd, ConditionBundle>>& batch,
    const NoiseSchedule& sched, std::uint64_t seed) {
  if (batch.empty()) {
    throw std::invalid_argument("training loss over an empty batch");
  }
  Rng rng(seed);
  double total = 0.0;
  for (const auto& [a0, c] : batch) {
    const int t = 1 + rng.uniform_int(sched.num_steps());
    const Eigen::MatrixXd eps = rng.normal_matrix(
        static_cast<int>(a0.rows()), static_cast<int>(a0.cols()));
    const Eigen::MatrixXd a_t = add_noise(a0, t, eps, sched);
    total += (eps - denoiser(a_t, t, c)).squaredNorm();
  }
  return total / static_cast<double>(batch.size());
}

PolicyModel::PolicyModel(const PolicyConfig& cfg, Rng& rng)
    : cfg(cfg),
      alpha("fusion.alpha", Eigen::MatrixXd::Constant(1, 1, 0.5)),
      beta("fusion.beta", Eigen::MatrixXd::Constant(1, 1, 0.5)),
      cond(cfg.cond, rng),
      den(cfg, rng),
      sched(make_schedule(cfg.diffusion_steps, cfg.beta_start, cfg.beta_end)) {
}

Eigen::MatrixXd PolicyModel::fuse_features(const Eigen::MatrixXd& feat_a,
                                           const Eigen::MatrixXd& feat_b) const {
  if (feat_a.rows() != feat_b.rows() || feat_a.cols() != feat_b.cols()) {
    throw std::invalid_argument("feature families must share a shape");
  }
  return fusion_alpha() * feat_a + fusion_beta() * feat_b;
}

ConditionBundle PolicyModel::condition(const semlift::SemanticField& field,
                                       const partition::LocalFieldSet& parts,
                                       const condition::RobotState& robot,
                                       const geometry::RigidTransform& pose) {
  nn::Tape t;
  nn::Var scene = condition::encode_scene(t, field, &cond.scene_encoder);
  nn::Var rob = condition::encode_robot(t, robot, &cond.robot_encoder);
  nn::Var embedded =
      condition::encode_parts(t, parts, pose, &cond.part_encoder);
  nn::Var refined = condition::refine_parts(t, embedded, &cond.refine);
  nn::Var agg = condition::aggregate_parts(t, refined);
  nn::Var global = condition::build_global_condition(t, scene, rob, agg);
  return {t.value(global), t.value(refined)};
}

std::pair<nn::Var, nn::Var> PolicyModel::condition_graph(
    nn::Tape& t, const TrainItem& item) {
  if (item.points.cols() != 3 || item.points.rows() < 1) {
    throw std::invalid_argument("item points must be n x 3");
  }
  if (item.feat_a.rows() != item.points.rows() ||
      item.feat_b.rows() != item.points.rows() ||
      item.feat_a.cols() != cfg.cond.feature_dim ||
      item.feat_b.cols() != cfg.cond.feature_dim) {
    throw std::invalid_argument("item features do not match config");
  }
  nn::Var fused =
      t.add(t.mul_scalar(t.input(item.feat_a), t.leaf(&alpha)),
            t.mul_scalar(t.input(item.feat_b), t.leaf(&beta)));
  nn::Var rows = t.concat_cols(t.input(item.points), fused);
  nn::Var scene = condition::encode_scene(t, rows, &cond.scene_encoder);
  nn::Var rob = condition::encode_robot(t, condition::RobotState{item.robot},
                                        &cond.robot_encoder);
  nn::Var embedded = condition::encode_parts(t, rows, item.part_indices,
                                             item.pose, &cond.part_encoder);
  nn::Var refined = condition::refine_parts(t, embedded, &cond.refine);
  nn::Var agg = condition::aggregate_parts(t, refined);
  nn::Var global = condition::build_global_condition(t, scene, rob, agg);
  return {global, refined};
}

Eigen::MatrixXd PolicyModel::predict(const Eigen::MatrixXd& a_t, int step,
                                     const ConditionBundle& c) {
  return den.predict(a_t, step, c.global, c.parts);
}

Eigen::MatrixXd PolicyModel::sample_actions(const ConditionBundle& c,
                                            std::uint64_t seed,
                                            bool deterministic) {
  auto fn = [this](const Eigen::MatrixXd& a, int t, const ConditionBundle& b) {
    return den.predict(a, t, b.global, b.parts);
  };
  return sample(fn, c, sched, cfg.horizon, cfg.action_dim, cfg.action_bound,
                seed, deterministic);
}

void PolicyModel::collect(std::vector<nn::Param*>* out) {
  out->push_back(&alpha);
  out->push_back(&beta);
  cond.collect(out);
  den.collect(out);
}

void PolicyModel::save(const std::string& path) {
  std::vector<nn::Param*> params;
  collect(&params);
  nn::save_checkpoint(path, params, cfg.config_hash());
}

void PolicyModel::load(const std::string& path) {
  std::vector<nn::Param*> params;
  collect(&params);
  nn::load_checkpoint(path, params, cfg.config_hash());
}

std::string TrainMetrics::to_jsonl() const {
  nlohmann::json j;
  j["step"] = step;
  j["loss"] = loss;
  j["lr"] = lr;
  j["alpha"] = alpha;
  j["beta"] = beta;
  return j.dump();
}

namespace {

std::vector<nn::Param*> collected(PolicyModel* model) {
  std::vector<nn::Param*> params;
  model->collect(&params);
  return params;
}

}  // namespace

Trainer::Trainer(PolicyModel* model, double lr, std::uint64_t seed)
    : model(model), opt(collected(model), lr), rng(seed) {}

TrainMetrics Trainer::train_step(const std::vector<const TrainItem*>& batch) {
  if (batch.empty()) {
    throw std::invalid_argument("empty training batch");
  }
  opt.zero_grad();
  const double inv = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const TrainItem* item : batch) {
    if (item->actions.rows() != model->cfg.horizon ||
        item->actions.cols() != model->cfg.action_dim) {
      throw std::invalid_argument("action chunk shape mismatch");
    }
    nn::Tape t;
    auto [global, parts] = model->condition_graph(t, *item);
    const int step_t = 1 + rng.uniform_int(model->sched.num_steps());
    const Eigen::MatrixXd eps = rng.normal_matrix(
        model->cfg.horizon, model->cfg.action_dim);
    const Eigen::MatrixXd a_t =
        add_noise(item->actions, step_t, eps, model->sched);
    nn::Var pred = model->den.forward(t, t.input(a_t), step_t, global, parts);
    nn::Var loss =
        t.scale(t.sum_squares(t.sub(pred, t.input(eps))), inv);
    t.backward(loss);
    total += t.value(loss)(0, 0);
  }
  opt.step();
  ++step;
  return {step, total, opt.lr(), model->fusion_alpha(),
          model->fusion_beta()};
}

}  // namespace semfield::policy
