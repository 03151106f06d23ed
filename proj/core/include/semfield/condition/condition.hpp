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

#ifndef SEMFIELD_CONDITION_CONDITION_HPP_
#define SEMFIELD_CONDITION_CONDITION_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/geometry/types.hpp"
#include "semfield/nn/modules.hpp"
#include "semfield/partition/partition.hpp"
#include "semfield/semlift/field.hpp"

namespace semfield::condition {

// Embedding dims. d_e is the raw part embedding; each part row additionally
// carries a 9-dim pose encoding, so downstream consumers see part_dim().
struct ConditionConfig {
  int feature_dim = 16;
  int d_g = 64;
  int d_r = 16;
  int d_e = 32;
  int robot_joints = 4;
  int attention_dim = 32;
  bool refine_prenorm = true;
  bool refine_residual = true;

  int point_dim() const { return 3 + feature_dim; }
  int part_dim() const { return d_e + 9; }
  int global_dim() const { return d_g + d_r + part_dim(); }
};

// Joint positions, radians or meters per joint type.
struct RobotState {
  Eigen::VectorXd joints;
};

// Per-point MLP followed by a column-wise max over points. The pooling is
// what makes the embedding independent of point order.
struct SetEncoder {
  nn::Mlp mlp;
  int input_dim = 0;
  int output_dim = 0;

  SetEncoder() = default;
  SetEncoder(const std::string& name, int in, int hidden, int out, Rng& rng);

  // rows: N x input_dim -> 1 x output_dim.
  nn::Var apply(nn::Tape& t, nn::Var rows);
  void collect(std::vector<nn::Param*>* out);
};

// Scaled dot-product self-attention over part rows, no positional input of
// any kind; output rows permute exactly with input rows. The output
// projection starts at zero, so the block is the identity at init when the
// residual is enabled.
struct SelfAttentionBlock {
  nn::Linear q, k, v, o;
  int dim = 0;
  int attention_dim = 0;
  bool prenorm = true;
  bool residual = true;

  SelfAttentionBlock() = default;
  SelfAttentionBlock(const std::string& name, int dim, int attention_dim,
                     Rng& rng, bool prenorm = true, bool residual = true);

  nn::Var apply(nn::Tape& t, nn::Var parts);
  void collect(std::vector<nn::Param*>* out);
};

// Residual cross-attention: queries from denoiser activations, keys and
// values from the part set. Zero-init output projection makes it the exact
// identity on activations at init; canonical reductions make it bit-exactly
// invariant to part order.
struct CrossAttentionBlock {
  nn::Linear q, k, v, o;
  int activation_dim = 0;
  int part_dim = 0;
  int attention_dim = 0;

  CrossAttentionBlock() = default;
  CrossAttentionBlock(const std::string& name, int activation_dim,
                      int part_dim, int attention_dim, Rng& rng);

  nn::Var apply(nn::Tape& t, nn::Var z, nn::Var parts);
  void collect(std::vector<nn::Param*>* out);
};

// [first two rotation columns; translation] as a 1x9 row.
Eigen::RowVectorXd pose_encoding(const geometry::RigidTransform& pose);

// N x (3 + d) matrix of [position, feature] rows.
Eigen::MatrixXd augmented_rows(const semlift::SemanticField& field);

nn::Var encode_scene(nn::Tape& t, const semlift::SemanticField& field,
                     SetEncoder* enc);
// Differentiable variant: rows is an N x (3 + d) node already on the tape,
// so gradients can flow back into upstream feature construction.
nn::Var encode_scene(nn::Tape& t, nn::Var rows, SetEncoder* enc);
nn::Var encode_robot(nn::Tape& t, const RobotState& state, nn::Mlp* enc);

// K x part_dim(): each part's set embedding with the object pose encoding
// appended. Row order follows part order and carries no meaning.
nn::Var encode_parts(nn::Tape& t, const partition::LocalFieldSet& parts,
                     const geometry::RigidTransform& pose, SetEncoder* enc);
// Differentiable variant gathering each part's rows from a shared node.
nn::Var encode_parts(nn::Tape& t, nn::Var rows,
                     const std::vector<std::vector<int>>& parts,
                     const geometry::RigidTransform& pose, SetEncoder* enc);

// Symmetric mean over part rows -> 1 x part_dim.
nn::Var aggregate_parts(nn::Tape& t, nn::Var parts);

// Concat(scene, robot, part) -> 1 x (d_g + d_r + d_p).
nn::Var build_global_condition(nn::Tape& t, nn::Var scene, nn::Var robot,
                               nn::Var part);

nn::Var refine_parts(nn::Tape& t, nn::Var parts, SelfAttentionBlock* block);
nn::Var cross_attend(nn::Tape& t, nn::Var z, nn::Var parts,
                     CrossAttentionBlock* block);

// Owns every conditioning-side encoder for one policy.
struct HierarchicalConditioner {
  ConditionConfig cfg;
  SetEncoder scene_encoder;
  nn::Mlp robot_encoder;
  SetEncoder part_encoder;
  SelfAttentionBlock refine;

  HierarchicalConditioner() = default;
  HierarchicalConditioner(const ConditionConfig& cfg, Rng& rng);

  void collect(std::vector<nn::Param*>* out);
};

}  // namespace semfield::condition

#endif  // SEMFIELD_CONDITION_CONDITION_HPP_
