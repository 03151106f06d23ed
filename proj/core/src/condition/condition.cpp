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

#include "semfield/condition/condition.hpp"

#include <cmath>
#include <stdexcept>

namespace semfield::condition {

SetEncoder::SetEncoder(const std::string& name, int in, int hidden, int out,
                       Rng& rng)
    : mlp(name, {in, hidden, out}, rng), input_dim(in), output_dim(out) {}

nn::Var SetEncoder::apply(nn::Tape& t, nn::Var rows) {
  if (t.value(rows).cols() != input_dim) {
    throw std::invalid_argument("point rows do not match encoder input dim");
  }
  return t.max_over_rows(mlp.apply(t, rows));
}

void SetEncoder::collect(std::vector<nn::Param*>* out) { mlp.collect(out); }

SelfAttentionBlock::SelfAttentionBlock(const std::string& name, int dim,
                                       int attention_dim, Rng& rng,
                                       bool prenorm, bool residual)
    : q(name + ".q", dim, attention_dim, rng),
      k(name + ".k", dim, attention_dim, rng),
      v(name + ".v", dim, attention_dim, rng),
      o(name + ".o", attention_dim, dim, rng, /*zero_init=*/true),
      dim(dim),
      attention_dim(attention_dim),
      prenorm(prenorm),
      residual(residual) {}

nn::Var SelfAttentionBlock::apply(nn::Tape& t, nn::Var parts) {
  if (t.value(parts).cols() != dim) {
    throw std::invalid_argument("part rows do not match attention dim");
  }
  nn::Var h = prenorm ? t.layernorm_rows(parts) : parts;
  nn::Var queries = q.apply(t, h);
  nn::Var keys = k.apply(t, h);
  nn::Var values = v.apply(t, h);
  nn::Var scores = t.scale(t.matmul_nt(queries, keys),
                           1.0 / std::sqrt(static_cast<double>(attention_dim)));
  nn::Var weights = t.softmax_rows_canonical(scores);
  nn::Var context = t.matmul_canonical(weights, values);
  nn::Var out = o.apply(t, context);
  return residual ? t.add(parts, out) : out;
}

void SelfAttentionBlock::collect(std::vector<nn::Param*>* out) {
  q.collect(out);
  k.collect(out);
  v.collect(out);
  o.collect(out);
}

CrossAttentionBlock::CrossAttentionBlock(const std::string& name,
                                         int activation_dim, int part_dim,
                                         int attention_dim, Rng& rng)
    : q(name + ".q", activation_dim, attention_dim, rng),
      k(name + ".k", part_dim, attention_dim, rng),
      v(name + ".v", part_dim, attention_dim, rng),
      o(name + ".o", attention_dim, activation_dim, rng, /*zero_init=*/true),
      activation_dim(activation_dim),
      part_dim(part_dim),
      attention_dim(attention_dim) {}

nn::Var CrossAttentionBlock::apply(nn::Tape& t, nn::Var z, nn::Var parts) {
  if (t.value(z).cols() != activation_dim) {
    throw std::invalid_argument("activations do not match attention config");
  }
  if (t.value(parts).cols() != part_dim) {
    throw std::invalid_argument("part rows do not match attention config");
  }
  nn::Var queries = q.apply(t, t.layernorm_rows(z));
  nn::Var keys = k.apply(t, parts);
  nn::Var values = v.apply(t, parts);
  nn::Var scores = t.scale(t.matmul_nt(queries, keys),
                           1.0 / std::sqrt(static_cast<double>(attention_dim)));
  nn::Var weights = t.softmax_rows_canonical(scores);
  nn::Var context = t.matmul_canonical(weights, values);
  return t.add(z, o.apply(t, context));
}

void CrossAttentionBlock::collect(std::vector<nn::Param*>* out) {
  q.collect(out);
  k.collect(out);
  v.collect(out);
  o.collect(out);
}

Eigen::RowVectorXd pose_encoding(const geometry::RigidTransform& pose) {
  Eigen::RowVectorXd enc(9);
  const Eigen::Matrix3d& r = pose.rotation();
  enc << r(0, 0), r(1, 0), r(2, 0), r(0, 1), r(1, 1), r(2, 1),
      pose.translation().x(), pose.translation().y(), pose.translation().z();
  return enc;
}

Eigen::MatrixXd augmented_rows(const semlift::SemanticField& field) {
  field.validate();
  Eigen::MatrixXd rows(field.size(), 3 + field.dim());
  rows.leftCols(3) = field.points;
  rows.rightCols(field.dim()) = field.features;
  return rows;
}

nn::Var encode_scene(nn::Tape& t, const semlift::SemanticField& field,
                     SetEncoder* enc) {
  return enc->apply(t, t.input(augmented_rows(field)));
}

nn::Var encode_scene(nn::Tape& t, nn::Var rows, SetEncoder* enc) {
  return enc->apply(t, rows);
}

nn::Var encode_robot(nn::Tape& t, const RobotState& state, nn::Mlp* enc) {
  const int in = static_cast<int>(enc->layers.front().w.value.rows());
  if (state.joints.size() != in) {
    throw std::invalid_argument("robot state does not match encoder joints");
  }
  if (!state.joints.allFinite()) {
    throw std::invalid_argument("robot state must be finite");
  }
  return enc->apply(t, t.input(state.joints.transpose()));
}

nn::Var encode_parts(nn::Tape& t, const partition::LocalFieldSet& parts,
                     const geometry::RigidTransform& pose, SetEncoder* enc) {
  if (parts.parts.empty()) {
    throw std::invalid_argument("no parts to encode");
  }
  nn::Var pose_row = t.input(pose_encoding(pose));
  nn::Var stacked{-1};
  for (std::size_t p = 0; p < parts.parts.size(); ++p) {
    if (parts.parts[p].size() < 1) {
      throw std::invalid_argument("cannot encode an empty part");
    }
    nn::Var row = enc->apply(t, t.input(augmented_rows(parts.parts[p])));
    row = t.concat_cols(row, pose_row);
    stacked = p == 0 ? row : t.concat_rows(stacked, row);
  }
  return stacked;
}

nn::Var encode_parts(nn::Tape& t, nn::Var rows,
                     const std::vector<std::vector<int>>& parts,
                     const geometry::RigidTransform& pose, SetEncoder* enc) {
  if (parts.empty()) {
    throw std::invalid_argument("no parts to encode");
  }
  nn::Var pose_row = t.input(pose_encoding(pose));
  nn::Var stacked{-1};
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].empty()) {
      throw std::invalid_argument("cannot encode an empty part");
    }
    nn::Var row = enc->apply(t, t.gather_rows(rows, parts[p]));
    row = t.concat_cols(row, pose_row);
    stacked = p == 0 ? row : t.concat_rows(stacked, row);
  }
  return stacked;
}

nn::Var aggregate_parts(nn::Tape& t, nn::Var parts) {
  return t.mean_over_rows_canonical(parts);
}

nn::Var build_global_condition(nn::Tape& t, nn::Var scene, nn::Var robot,
                               nn::Var part) {
  if (t.value(scene).rows() != 1 || t.value(robot).rows() != 1 ||
      t.value(part).rows() != 1) {
    throw std::invalid_argument("condition segments must be single rows");
  }
  return t.concat_cols(t.concat_cols(scene, robot), part);
}

nn::Var refine_parts(nn::Tape& t, nn::Var parts, SelfAttentionBlock* block) {
  return block->apply(t, parts);
}

nn::Var cross_attend(nn::Tape& t, nn::Var z, nn::Var parts,
                     CrossAttentionBlock* block) {
  return block->apply(t, z, parts);
}

HierarchicalConditioner::HierarchicalConditioner(const ConditionConfig& cfg,
                                                 Rng& rng)
    : cfg(cfg),
      scene_encoder("scene", cfg.point_dim(), 2 * cfg.d_g, cfg.d_g, rng),
      robot_encoder("robot", {cfg.robot_joints, 4 * cfg.d_r, cfg.d_r}, rng),
      part_encoder("part", cfg.point_dim(), 2 * cfg.d_e, cfg.d_e, rng),
      refine("refine", cfg.part_dim(), cfg.attention_dim, rng,
             cfg.refine_prenorm, cfg.refine_residual) {}

void HierarchicalConditioner::collect(std::vector<nn::Param*>* out) {
  scene_encoder.collect(out);
  robot_encoder.collect(out);
  part_encoder.collect(out);
  refine.collect(out);
}

}  // namespace semfield::condition
