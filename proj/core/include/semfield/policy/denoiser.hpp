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

#ifndef SEMFIELD_POLICY_DENOISER_HPP_
#define SEMFIELD_POLICY_DENOISER_HPP_

#include <string>
#include <vector>

#include "semfield/condition/condition.hpp"
#include "semfield/nn/modules.hpp"
#include "semfield/nn/tape.hpp"
#include "semfield/rng.hpp"

namespace semfield::policy {

// Dimensions and schedule settings for one policy. The conditioning dims
// live in `cond`; global_dim() there is the width of the global condition
// row the denoiser is modulated by.
struct PolicyConfig {
  int horizon = 8;      // action rows per trajectory
  int action_dim = 4;   // columns per action row
  int channels = 64;    // base channel width of the temporal encoder
  std::vector<int> stage_mults = {1, 2, 1};
  int diffusion_steps = 100;
  double beta_start = 1e-4;
  double beta_end = 2e-2;
  double action_bound = 1.0;  // sampled actions clipped to +-bound
  condition::ConditionConfig cond;

  int step_dim() const { return channels; }
  // Canonical serialization; its hash guards checkpoint/config pairing.
  std::string to_json() const;
  std::string config_hash() const;
};

// sin/cos features of the diffusion step, 1 x dim, dim even. Frequencies
// follow the usual geometric ladder from 1 down to 1/10000.
Eigen::RowVectorXd sinusoidal_step_embedding(int t, int dim);

// One temporal stage: kernel-3 convolution over the horizon axis expressed
// as three shifted matmuls, FiLM modulation from (global condition, step
// embedding), ReLU, then cross-attention into the part set. The FiLM layer
// and the cross-attention output projection start at zero, so at init the
// stage is conv + ReLU only.
struct DenoiserStage {
  nn::Param w_prev, w_cur, w_next;
  nn::Param bias;
  nn::Linear film;  // (global_dim + step_dim) -> 2 * out, zero-init
  condition::CrossAttentionBlock cross;
  int in = 0;
  int out = 0;

  DenoiserStage() = default;
  DenoiserStage(const std::string& name, int in, int out, int cond_dim,
                int part_dim, int attention_dim, Rng& rng);

  nn::Var apply(nn::Tape& t, nn::Var h, nn::Var film_in, nn::Var parts);
  void collect(std::vector<nn::Param*>* out_params);
};

// Noise predictor: input projection, the configured stage stack, and a
// zero-initialized output projection (so the untrained denoiser predicts
// exactly zero noise). Part rows only enter through canonical
// cross-attention, which keeps every prediction bit-identical under part
// permutations.
struct ConvDenoiser {
  PolicyConfig cfg;
  nn::Linear input_proj;
  std::vector<DenoiserStage> stages;
  nn::Linear output_proj;

  ConvDenoiser() = default;
  ConvDenoiser(const PolicyConfig& cfg, Rng& rng);

  // a_t: horizon x action_dim node; global: 1 x global_dim; parts: K x
  // part_dim. Returns predicted noise, horizon x action_dim.
  nn::Var forward(nn::Tape& t, nn::Var a_t, int step, nn::Var global,
                  nn::Var parts);
  // Value-level convenience for inference; builds a throwaway tape.
  Eigen::MatrixXd predict(const Eigen::MatrixXd& a_t, int step,
                          const Eigen::MatrixXd& global,
                          const Eigen::MatrixXd& parts);
  void collect(std::vector<nn::Param*>* out_params);
};

}  // namespace semfield::policy

#endif  // SEMFIELD_POLICY_DENOISER_HPP_
