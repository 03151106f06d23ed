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

#ifndef SEMFIELD_BENCH_TOY_HPP_
#define SEMFIELD_BENCH_TOY_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/geometry/types.hpp"

namespace semfield::bench {

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// Wraps an angle to [-pi/2, pi/2), i.e. modulo the half turn. Used by the
// observed-pose channel, which reports orientation only up to the object's
// near-symmetry.
double wrap_axis(double a);

// Planar pose: xy translation plus rotation about z. The world is a table
// plane at z = 0.
struct PlanarPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  geometry::RigidTransform transform() const;
};

// A flat object: a simple polygon in its body frame, with one vertex marked
// as the head tip and one as the tail end. Surface points are labeled
// head / tail / body by body-frame x thresholds.
struct ToyObject {
  std::string id;
  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices;  // CCW, body frame
  int head_vertex = -1;
  int tail_vertex = -1;
  double head_min_x = 0.0;  // body x >= head_min_x -> head
  double tail_max_x = 0.0;  // body x <= tail_max_x -> tail

  // Signed shoelace area; positive for CCW order.
  double area() const;
  void validate() const;
  bool contains(const Eigen::Vector2d& body_pt) const;
  // Label of an interior body-frame point. Uses the semlift label ids:
  // 1 = body, 2 = head, 3 = tail (0 is background, never returned here).
  int label_at(const Eigen::Vector2d& body_pt) const;
  // Deterministic interior sample grid (row-major scan, pitch meters).
  Eigen::Matrix<double, Eigen::Dynamic, 2> surface_grid(double pitch) const;
};

// The default object: a rectangle with a triangular nose on the head end.
// The outline is visibly asymmetric, so part-level geometry alone can tell
// head from tail, while the observed pose (axis only) cannot.
ToyObject make_arrow_object();

// A second copy of the arrow used as a static scene object. It shares the
// tracked object's shape and label palette, so pooled per-point statistics
// mix the two objects' head and tail evidence; telling them apart requires
// spatially grouped reasoning.
ToyObject make_distractor_object();

// Uniform randomization half-ranges for the initial pose.
struct PoseRanges {
  double x = 0.14;
  double y = 0.14;
  double theta = 3.14159265358979323846;
};

struct TaskSpec {
  std::string name = "align_arrow";
  std::vector<ToyObject> objects;
  double delta_pos = 0.02;                  // meters
  double delta_ang = 15.0 * 3.14159265358979323846 / 180.0;  // radians
  PoseRanges ranges;
  PlanarPose target;      // desired object pose (head axis direction)
  double max_step = 0.05;  // per-step |dx|, |dy| actuation cap, meters
  double max_turn = 0.45;  // per-step |dtheta| cap, radians
  int episode_len = 16;

  void validate() const;
};

TaskSpec make_default_task();

// Success: position within delta_pos of the target and heading within
// delta_ang of the target heading. Rotating pose and target together about
// the origin leaves the verdict unchanged.
bool pose_success(const PlanarPose& pose, const PlanarPose& target,
                  const TaskSpec& spec);

// Actions are [dx, dy, dtheta, grip] in raw actuator units. The normalized
// form divides the motion channels by the spec caps and maps grip from
// [0, 1] to [-1, 1], so every channel lives in [-1, 1].
Eigen::RowVector4d normalize_action(const Eigen::RowVector4d& raw,
                                    const TaskSpec& spec);
Eigen::RowVector4d denormalize_action(const Eigen::RowVector4d& norm,
                                      const TaskSpec& spec);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_TOY_HPP_
