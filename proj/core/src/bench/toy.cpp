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

#include "semfield/bench/toy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "semfield/errors.hpp"

namespace semfield::bench {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

double wrap_axis(double a) {
  a = std::fmod(a, kPi);
  if (a < -kPi / 2.0) a += kPi;
  if (a >= kPi / 2.0) a -= kPi;
  return a;
}

geometry::RigidTransform PlanarPose::transform() const {
  return geometry::RigidTransform::rotation_z(theta,
                                              Eigen::Vector3d(x, y, 0.0));
}

double ToyObject::area() const {
  double twice = 0.0;
  const Eigen::Index m = vertices.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    twice += vertices(i, 0) * vertices(j, 1) - vertices(j, 0) * vertices(i, 1);
  }
  return 0.5 * twice;
}

void ToyObject::validate() const {
  if (vertices.rows() < 3) {
    throw ConfigError("object polygon needs at least 3 vertices");
  }
  if (!vertices.allFinite()) {
    throw ConfigError("object polygon has non-finite vertices");
  }
  if (area() <= 1e-12) {
    throw ConfigError("object polygon is degenerate or not CCW");
  }
  const int m = static_cast<int>(vertices.rows());
  if (head_vertex < 0 || head_vertex >= m || tail_vertex < 0 ||
      tail_vertex >= m || head_vertex == tail_vertex) {
    throw ConfigError("head/tail vertex labels must name distinct vertices");
  }
  if (head_min_x <= tail_max_x) {
    throw ConfigError("head region must lie strictly ahead of the tail");
  }
  // Both label regions must actually contain part of the outline.
  if (vertices.col(0).maxCoeff() < head_min_x ||
      vertices.col(0).minCoeff() > tail_max_x) {
    throw ConfigError("head and tail label regions must both be non-empty");
  }
}

bool ToyObject::contains(const Eigen::Vector2d& p) const {
  // Ray casting with the even-odd rule.
  bool inside = false;
  const Eigen::Index m = vertices.rows();
  for (Eigen::Index i = 0, j = m - 1; i < m; j = i++) {
    const double xi = vertices(i, 0), yi = vertices(i, 1);
    const double xj = vertices(j, 0), yj = vertices(j, 1);
    const bool crosses = (yi > p.y()) != (yj > p.y());
    if (crosses &&
        p.x() < (xj - xi) * (p.y() - yi) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

int ToyObject::label_at(const Eigen::Vector2d& p) const {
  if (p.x() >= head_min_x) return 2;
  if (p.x() <= tail_max_x) return 3;
  return 1;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> ToyObject::surface_grid(
    double pitch) const {
  if (pitch <= 0.0) throw ConfigError("surface grid pitch must be positive");
  const double x_lo = vertices.col(0).minCoeff();
  const double x_hi = vertices.col(0).maxCoeff();
  const double y_lo = vertices.col(1).minCoeff();
  const double y_hi = vertices.col(1).maxCoeff();
  std::vector<Eigen::Vector2d> pts;
  // Half-pitch inset keeps samples off the exact boundary.
  for (double y = y_lo + 0.5 * pitch; y <= y_hi; y += pitch) {
    for (double x = x_lo + 0.5 * pitch; x <= x_hi; x += pitch) {
      const Eigen::Vector2d p(x, y);
      if (contains(p)) pts.push_back(p);
    }
  }
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(
      static_cast<Eigen::Index>(pts.size()), 2);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out.row(i) = pts[static_cast<std::size_t>(i)].transpose();
  }
  return out;
}

ToyObject make_arrow_object() {
  ToyObject obj;
  obj.id = "arrow";
  obj.vertices.resize(5, 2);
  obj.vertices << -0.08, -0.04,  //
      0.04, -0.04,               //
      0.10, 0.00,                // nose tip
      0.04, 0.04,                //
      -0.08, 0.04;
  obj.head_vertex = 2;
  obj.tail_vertex = 0;
  obj.head_min_x = 0.02;
  obj.tail_max_x = -0.03;
  obj.validate();
  return obj;
}

void TaskSpec::validate() const {
  if (name.empty()) throw ConfigError("task name must be non-empty");
  if (objects.empty()) throw ConfigError("task needs at least one object");
  for (const auto& obj : objects) obj.validate();
  if (!(delta_pos > 0.0) || !(delta_ang > 0.0)) {
    throw ConfigError("success tolerances must be positive");
  }
  if (ranges.x < 0.0 || ranges.y < 0.0 || ranges.theta < 0.0) {
    throw ConfigError("randomization ranges must be non-negative");
  }
  if (!(max_step > 0.0) || !(max_turn > 0.0)) {
    throw ConfigError("actuation caps must be positive");
  }
  if (episode_len < 1) throw ConfigError("episode length must be >= 1");
}

ToyObject make_distractor_object() {
  ToyObject obj = make_arrow_object();
  obj.id = "arrow_distractor";
  return obj;
}

TaskSpec make_default_task() {
  TaskSpec spec;
  spec.objects.push_back(make_arrow_object());
  spec.objects.push_back(make_distractor_object());
  spec.validate();
  return spec;
}

bool pose_success(const PlanarPose& pose, const PlanarPose& target,
                  const TaskSpec& spec) {
  const double dx = pose.x - target.x;
  const double dy = pose.y - target.y;
  const double dist = std::sqrt(dx * dx + dy * dy);
  const double dang = std::abs(wrap_angle(pose.theta - target.theta));
  return dist <= spec.delta_pos && dang <= spec.delta_ang;
}

Eigen::RowVector4d normalize_action(const Eigen::RowVector4d& raw,
                                    const TaskSpec& spec) {
  Eigen::RowVector4d n;
  n << raw(0) / spec.max_step, raw(1) / spec.max_step, raw(2) / spec.max_turn,
      2.0 * raw(3) - 1.0;
  return n;
}

Eigen::RowVector4d denormalize_action(const Eigen::RowVector4d& norm,
                                      const TaskSpec& spec) {
  Eigen::RowVector4d r;
  r << norm(0) * spec.max_step, norm(1) * spec.max_step,
      norm(2) * spec.max_turn, 0.5 * (norm(3) + 1.0);
  return r;
}

}  // namespace semfield::bench
