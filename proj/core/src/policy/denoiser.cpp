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

#include "semfield/policy/denoiser.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "semfield/hash.hpp"

namespace semfield::policy {

std::string PolicyConfig::to_json() const {
  nlohmann::json j;
  j["horizon"] = horizon;
  j["action_dim"] = action_dim;
  j["channels"] = channels;
  j["stage_mults"] = stage_mults;
  j["diffusion_steps"] = diffusion_steps;
  j["beta_start"] = beta_start;
  j["beta_end"] = beta_end;
  j["action_bound"] = action_bound;
  j["cond"] = {{"feature_dim", cond.feature_dim},
               {"d_g", cond.d_g},
               {"d_r", cond.d_r},
               {"d_e", cond.d_e},
               {"robot_joints", cond.robot_joints},
               {"attention_dim", cond.attention_dim},
               {"refine_prenorm", cond.refine_prenorm},
               {"refine_residual", cond.refine_residual}};
  return j.dump();
}

std::string PolicyConfig::config_hash() const { return fnv1a_hex(to_json()); }

Eigen::RowVectorXd sinusoidal_step_embedding(int t, int dim) {
  if (dim < 2 || dim % 2 != 0) {
    throw std::invalid_argument("step embedding dim must be even");
  }
  const int half = dim / 2;
  Eigen::RowVectorXd out(dim);
  for (int i = 0; i < half; ++i) {
    const double freq =
        std::exp(-std::log(10000.0) * static_cast<double>(i) / half);
    out(2 * i) = std::sin(t * freq);
    out(2 * i + 1) = std::cos(t * freq);
  }
  return out;
}

DenoiserStage::DenoiserStage(const std::string& name, int in, int out,
                             int cond_dim, int part_dim, int attention_dim,
                             Rng& rng)
    : w_prev(name + ".w_prev",
             rng.normal_matrix(in, out) * std::sqrt(2.0 / in)),
      w_cur(name + ".w_cur", rng.normal_matrix(in, out) * std::sqrt(2.0 / in)),
      w_next(name + ".w_next",
             rng.normal_matrix(in, out) * std::sqrt(2.0 / in)),
      bias(name + ".bias", Eigen::MatrixXd::Zero(1, out)),
      film(name + ".film", cond_dim, 2 * out, rng, /*zero_init=*/true),
      cross(name + ".cross", out, part_dim, attention_dim, rng),
      in(in),
      out(out) {}

nn::Var DenoiserStage::apply(nn::Tape& t, nn::Var h, nn::Var film_in,
                             nn::Var parts) {
  nn::Var conv = t.add(t.matmul(t.shift_rows(h, 1), t.leaf(&w_prev)),
                       t.matmul(h, t.leaf(&w_cur)));
  conv = t.add(conv, t.matmul(t.shift_rows(h, -1), t.leaf(&w_next)));
  conv = t.add_broadcast_row(conv, t.leaf(&bias));

  nn::Var mod = film.apply(t, film_in);
  nn::Var gain = t.add_scalar(t.slice_cols(mod, 0, out), 1.0);
  nn::Var shift = t.slice_cols(mod, out, out);
  nn::Var g = t.add_broadcast_row(t.mul_broadcast_row(conv, gain), shift);
  g = t.relu(g);
  return cross.apply(t, g, parts);
}

void DenoiserStage::collect(std::vector<nn::Param*>* out_params) {
  out_params->push_back(&w_prev);
  out_params->push_back(&w_cur);
  out_params->push_back(&w_next);
  out_params->push_back(&bias);
  film.collect(out_params);
  cross.collect(out_params);
}

ConvDenoiser::ConvDenoiser(const PolicyConfig& cfg, Rng& rng) : cfg(cfg) {
  if (cfg.horizon < 1 || cfg.action_dim < 1) {
    throw std::invalid_argument("trajectory dims must be positive");
  }
  if (cfg.channels < 2 || cfg.channels % 2 != 0) {
    throw std::invalid_argument("channels must be even and >= 2");
  }
  if (cfg.stage_mults.empty()) {
    throw std::invalid_argument("need at least one denoiser stage");
  }
  input_proj = nn::Linear("den.in", cfg.action_dim, cfg.channels, rng);
  const int cond_dim = cfg.cond.global_dim() + cfg.step_dim();
  int prev = cfg.channels;
  for (std::size_t i = 0; i < cfg.stage_mults.size(); ++i) {
    if (cfg.stage_mults[i] < 1) {
      throw std::invalid_argument("stage multiplier must be positive");
    }
    const int width = cfg.channels * cfg.stage_mults[i];
    stages.emplace_back("den.s" + std::to_string(i), prev, width, cond_dim,
                        cfg.cond.part_dim(), cfg.cond.attention_dim, rng);
    prev = width;
  }
  output_proj =
      nn::Linear("den.out", prev, cfg.action_dim, rng, /*zero_init=*/true);
}

nn::Var ConvDenoiser::forward(nn::Tape& t, nn::Var a_t, int step,
                              nn::Var global, nn::Var parts) {
  if (t.value(a_t).rows() != cfg.horizon ||
      t.value(a_t).cols() != cfg.action_dim) {
    throw std::invalid_argument("trajectory shape does not match config");
  }
  if (t.value(global).rows() != 1 ||
      t.value(global).cols() != cfg.cond.global_dim()) {
    throw std::invalid_argument("global condition width mismatch");
  }
  if (t.value(parts).cols() != cfg.cond.part_dim()) {
    throw std::invalid_argument("part embedding width mismatch");
  }
  if (step < 1 || step > cfg.diffusion_steps) {
    throw std::invalid_argument("diffusion step out of range");
  }
  nn::Var film_in = t.concat_cols(
      global, t.input(sinusoidal_step_embedding(step, cfg.step_dim())));
  nn::Var h = input_proj.apply(t, a_t);
  for (auto& stage : stages) {
    h = stage.apply(t, h, film_in, parts);
  }
  return output_proj.apply(t, h);
}

Eigen::MatrixXd ConvDenoiser::predict(const Eigen::MatrixXd& a_t, int step,
                                      const Eigen::MatrixXd& global,
                                      const Eigen::MatrixXd& parts) {
  nn::Tape t;
  nn::Var out =
      forward(t, t.input(a_t), step, t.input(global), t.input(parts));
  return t.value(out);
}

void ConvDenoiser::collect(std::vector<nn::Param*>* out_params) {
  input_proj.collect(out_params);
  for (auto& stage : stages) stage.collect(out_params);
  output_proj.collect(out_params);
}

}  // namespace semfield::policy
