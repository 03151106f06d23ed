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

#ifndef SEMFIELD_BENCH_ENV_HPP_
#define SEMFIELD_BENCH_ENV_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "semfield/bench/toy.hpp"
#include "semfield/geometry/types.hpp"
#include "semfield/partition/partition.hpp"
#include "semfield/semlift/extractor.hpp"
#include "semfield/semlift/field.hpp"

namespace semfield::bench {

// How raw states turn into policy observations: camera intrinsics for the
// top-down feature renderer, surface sampling density, subsample size, and
// the part count.
struct ObservationConfig {
  int n_points = 64;        // farthest-point subsample size
  int parts = 8;            // K
  int image_size = 64;      // square label image
  double focal = 100.0;     // fx = fy, pixels (z = 1 plane)
  double grid_pitch = 0.008;  // body-frame surface sampling pitch, meters
  std::uint64_t fps_seed = 17;

  void validate() const;
  // Camera 1 m above the table, looking straight down; world x maps to +u
  // and world y to -v.
  geometry::CameraModel camera() const;
};

// Number of robot state channels: gripper x, gripper y, grip, episode phase.
inline constexpr int kRobotDim = 4;

// What the policy sees at one timestep. The field carries the two feature
// blocks side by side: columns [0, d) from the sharp label oracle and
// [d, 2d) from the smoothed one.
struct Observation {
  semlift::SemanticField field;
  std::vector<std::vector<int>> part_indices;
  Eigen::VectorXd robot;
  PlanarPose pose_true;
  // Orientation reported modulo a half turn: a tracker with a symmetry
  // prior cannot tell the two ends apart, so heading must come from the
  // semantics, not from this channel.
  geometry::RigidTransform pose_obs;
  int t = 0;
};

// Renders the label image of a scene (background 0, body 1, head 2,
// tail 3, painted via semlift::label_color). Objects must not overlap.
semlift::Image render_labels(const std::vector<ToyObject>& objects,
                             const std::vector<PlanarPose>& poses,
                             const ObservationConfig& cfg);
semlift::Image render_labels(const ToyObject& obj, const PlanarPose& pose,
                             const ObservationConfig& cfg);

// Kinematic environment. Object 0 is the one the task moves; any further
// objects are static distractors, placed on a ring around the workspace
// with a clearance check so the painted labels stay disjoint. reset()
// draws the tracked pose uniformly within the spec ranges, renders and
// lifts the initial semantic field over every object, and partitions it
// once; later observations move the tracked object's points rigidly and
// leave the rest in place, so features stay bit-identical across the
// episode. The distractor ring assumes the default pose ranges and field
// of view.
class ToyEnv {
 public:
  ToyEnv(const TaskSpec& spec, const ObservationConfig& obs_cfg);

  void reset(std::uint64_t seed);
  // action = [dx, dy, dtheta, grip], raw units; motion channels are clamped
  // to the spec caps and grip to [0, 1].
  void step(const Eigen::RowVector4d& action);
  Observation observe() const;

  const PlanarPose& pose() const { return pose_; }
  int t() const { return t_; }
  bool done() const { return t_ >= spec_.episode_len; }
  bool success() const { return pose_success(pose_, spec_.target, spec_); }
  const TaskSpec& spec() const { return spec_; }
  const semlift::Image& initial_image() const { return image0_; }
  const semlift::SemanticField& initial_field() const { return field0_; }
  // Which object each field row was sampled from (0 = tracked).
  const std::vector<int>& point_object() const { return point_obj_; }
  // Poses drawn for the static objects, aligned with objects[1..].
  const std::vector<PlanarPose>& distractor_poses() const {
    return distractor_poses_;
  }

 private:
  TaskSpec spec_;
  ObservationConfig ocfg_;
  PlanarPose pose_;
  PlanarPose initial_pose_;
  std::vector<PlanarPose> distractor_poses_;
  int t_ = 0;
  bool has_state_ = false;
  semlift::SemanticField field0_;
  std::vector<std::vector<int>> parts_;
  std::vector<int> point_obj_;
  semlift::Image image0_;
};

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_ENV_HPP_
