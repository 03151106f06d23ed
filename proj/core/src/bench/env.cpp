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

#include "semfield/bench/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "semfield/errors.hpp"
#include "semfield/geometry/fps.hpp"
#include "semfield/rng.hpp"

namespace semfield::bench {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Static objects are drawn on this ring of center distances from the world
// origin. With the default pose ranges and camera the whole ring stays in
// view: ring max plus object extent is under the half field of view.
constexpr double kRingMin = 0.17;
constexpr double kRingMax = 0.20;
// Minimum boundary-to-boundary separation between placed objects.
constexpr double kPlacementClearance = 0.02;
constexpr int kMaxPlacementAttempts = 1000;

Eigen::Matrix<double, Eigen::Dynamic, 2> world_vertices(
    const ToyObject& obj, const PlanarPose& pose) {
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(obj.vertices.rows(), 2);
  for (Eigen::Index i = 0; i < obj.vertices.rows(); ++i) {
    const double bx = obj.vertices(i, 0), by = obj.vertices(i, 1);
    out(i, 0) = c * bx - s * by + pose.x;
    out(i, 1) = s * bx + c * by + pose.y;
  }
  return out;
}

double point_segment_dist(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t =
      len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double segment_segment_dist(const Eigen::Vector2d& a0,
                            const Eigen::Vector2d& a1,
                            const Eigen::Vector2d& b0,
                            const Eigen::Vector2d& b1) {
  const auto orient = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                         const Eigen::Vector2d& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) -
           (q.y() - p.y()) * (r.x() - p.x());
  };
  const double d1 = orient(a0, a1, b0), d2 = orient(a0, a1, b1);
  const double d3 = orient(b0, b1, a0), d4 = orient(b0, b1, a1);
  if ((d1 > 0) != (d2 > 0) && (d3 > 0) != (d4 > 0)) return 0.0;
  return std::min({point_segment_dist(b0, a0, a1),
                   point_segment_dist(b1, a0, a1),
                   point_segment_dist(a0, b0, b1),
                   point_segment_dist(a1, b0, b1)});
}

// Smallest distance between two polygon boundaries; zero when they cross.
// The scene only ever places congruent shapes, which cannot nest, so
// boundary distance is a faithful clearance measure.
double polygon_clearance(const Eigen::Matrix<double, Eigen::Dynamic, 2>& a,
                         const Eigen::Matrix<double, Eigen::Dynamic, 2>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::Vector2d a0 = a.row(i).transpose();
    const Eigen::Vector2d a1 = a.row((i + 1) % a.rows()).transpose();
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      const Eigen::Vector2d b0 = b.row(j).transpose();
      const Eigen::Vector2d b1 = b.row((j + 1) % b.rows()).transpose();
      best = std::min(best, segment_segment_dist(a0, a1, b0, b1));
    }
  }
  return best;
}

double bounding_radius(const ToyObject& obj) {
  return obj.vertices.rowwise().norm().maxCoeff();
}

}  // namespace

void ObservationConfig::validate() const {
  if (n_points < 2) throw ConfigError("need at least 2 sampled points");
  if (parts < 1) throw ConfigError("part count must be >= 1");
  if (parts > n_points) throw ConfigError("more parts than sampled points");
  if (image_size < 2) throw ConfigError("image size must be >= 2");
  if (!(focal > 0.0)) throw ConfigError("focal length must be positive");
  if (!(grid_pitch > 0.0)) throw ConfigError("grid pitch must be positive");
}

geometry::CameraModel ObservationConfig::camera() const {
  geometry::CameraModel cam;
  cam.fx = focal;
  cam.fy = focal;
  cam.cx = (image_size - 1) / 2.0;
  cam.cy = (image_size - 1) / 2.0;
  cam.width = image_size;
  cam.height = image_size;
  Eigen::Matrix3d r;
  r << 1, 0, 0,  //
      0, -1, 0,  //
      0, 0, -1;
  cam.world_to_camera =
      geometry::RigidTransform(r, Eigen::Vector3d(0.0, 0.0, 1.0));
  return cam;
}

semlift::Image render_labels(const std::vector<ToyObject>& objects,
                             const std::vector<PlanarPose>& poses,
                             const ObservationConfig& cfg) {
  cfg.validate();
  if (objects.size() != poses.size()) {
    throw ConfigError("one pose per object required");
  }
  const geometry::CameraModel cam = cfg.camera();
  semlift::Image img;
  img.height = cfg.image_size;
  img.width = cfg.image_size;
  img.rgb.resize(static_cast<Eigen::Index>(img.height) * img.width, 3);
  std::vector<double> cs(objects.size()), ss(objects.size());
  for (std::size_t k = 0; k < objects.size(); ++k) {
    cs[k] = std::cos(poses[k].theta);
    ss[k] = std::sin(poses[k].theta);
  }
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      // Pixel center back-projected to the z = 0 table plane.
      const double wx = (u - cam.cx) / cam.fx;
      const double wy = -(v - cam.cy) / cam.fy;
      int label = 0;
      for (std::size_t k = 0; k < objects.size() && label == 0; ++k) {
        // World -> body frame.
        const double dx = wx - poses[k].x, dy = wy - poses[k].y;
        const Eigen::Vector2d body(cs[k] * dx + ss[k] * dy,
                                   -ss[k] * dx + cs[k] * dy);
        if (objects[k].contains(body)) label = objects[k].label_at(body);
      }
      img.rgb.row(static_cast<Eigen::Index>(v) * img.width + u) =
          semlift::label_color(label).transpose();
    }
  }
  return img;
}

semlift::Image render_labels(const ToyObject& obj, const PlanarPose& pose,
                             const ObservationConfig& cfg) {
  return render_labels(std::vector<ToyObject>{obj},
                       std::vector<PlanarPose>{pose}, cfg);
}

ToyEnv::ToyEnv(const TaskSpec& spec, const ObservationConfig& obs_cfg)
    : spec_(spec), ocfg_(obs_cfg) {
  spec_.validate();
  ocfg_.validate();
}

void ToyEnv::reset(std::uint64_t seed) {
  Rng rng(seed);
  pose_.x = (2.0 * rng.uniform() - 1.0) * spec_.ranges.x;
  pose_.y = (2.0 * rng.uniform() - 1.0) * spec_.ranges.y;
  pose_.theta = wrap_angle((2.0 * rng.uniform() - 1.0) * spec_.ranges.theta);
  initial_pose_ = pose_;
  t_ = 0;
  has_state_ = true;

  // The tracked pose is drawn first, so its distribution is unchanged by
  // however many static objects follow. Each of those is re-drawn on the
  // ring until it clears everything already placed.
  std::vector<PlanarPose> poses{pose_};
  distractor_poses_.clear();
  for (std::size_t k = 1; k < spec_.objects.size(); ++k) {
    PlanarPose placed;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !ok; ++attempt) {
      const double radius = rng.uniform(kRingMin, kRingMax);
      const double bearing = rng.uniform(-kPi, kPi);
      placed.x = radius * std::cos(bearing);
      placed.y = radius * std::sin(bearing);
      placed.theta = wrap_angle(rng.uniform(-kPi, kPi));
      ok = true;
      const auto placed_verts = world_vertices(spec_.objects[k], placed);
      for (std::size_t j = 0; j < poses.size() && ok; ++j) {
        const double cd =
            std::hypot(placed.x - poses[j].x, placed.y - poses[j].y);
        if (cd >= bounding_radius(spec_.objects[k]) +
                      bounding_radius(spec_.objects[j]) + kPlacementClearance) {
          continue;
        }
        const auto other = world_vertices(spec_.objects[j], poses[j]);
        if (polygon_clearance(placed_verts, other) < kPlacementClearance) {
          ok = false;
        }
      }
    }
    if (!ok) {
      throw ConfigError("could not place a static object clear of the scene");
    }
    poses.push_back(placed);
    distractor_poses_.push_back(placed);
  }

  image0_ = render_labels(spec_.objects, poses, ocfg_);
  const geometry::FeatureMap map_a =
      semlift::LabelOracleExtractor().extract(image0_);
  const geometry::FeatureMap map_b =
      semlift::SmoothOracleExtractor().extract(image0_);

  // Candidate surface points from every object, tagged with their source so
  // the rows belonging to the tracked object are known after subsampling.
  Eigen::Index total = 0;
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>> grids;
  grids.reserve(spec_.objects.size());
  for (const auto& obj : spec_.objects) {
    grids.push_back(obj.surface_grid(ocfg_.grid_pitch));
    total += grids.back().rows();
  }
  geometry::PointCloud candidates;
  candidates.points.resize(total, 3);
  std::vector<int> candidate_obj(static_cast<std::size_t>(total));
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const double c = std::cos(poses[k].theta), s = std::sin(poses[k].theta);
    for (Eigen::Index i = 0; i < grids[k].rows(); ++i, ++row) {
      candidates.points(row, 0) =
          c * grids[k](i, 0) - s * grids[k](i, 1) + poses[k].x;
      candidates.points(row, 1) =
          s * grids[k](i, 0) + c * grids[k](i, 1) + poses[k].y;
      candidates.points(row, 2) = 0.0;
      candidate_obj[static_cast<std::size_t>(row)] = static_cast<int>(k);
    }
  }
  const std::vector<int> keep = geometry::farthest_point_sample(
      candidates, std::min<int>(ocfg_.n_points,
                                static_cast<int>(candidates.size())),
      ocfg_.fps_seed);
  geometry::PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(keep.size()), 3);
  point_obj_.resize(keep.size());
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
    const int src = keep[static_cast<std::size_t>(i)];
    cloud.points.row(i) = candidates.points.row(src);
    point_obj_[static_cast<std::size_t>(i)] =
        candidate_obj[static_cast<std::size_t>(src)];
  }

  const semlift::SemanticField lifted_a =
      semlift::lift(cloud, ocfg_.camera(), map_a);
  const semlift::SemanticField lifted_b =
      semlift::lift(cloud, ocfg_.camera(), map_b);
  field0_.points = cloud.points;
  field0_.features.resize(cloud.points.rows(),
                          lifted_a.dim() + lifted_b.dim());
  field0_.features << lifted_a.features, lifted_b.features;
  field0_.timestep = 0;

  const partition::LocalFieldSet parts =
      partition::partition_pca(field0_, ocfg_.parts);
  parts_ = parts.parent_indices;
}

void ToyEnv::step(const Eigen::RowVector4d& action) {
  if (!has_state_) throw std::logic_error("step before reset");
  const double dx = std::clamp(action(0), -spec_.max_step, spec_.max_step);
  const double dy = std::clamp(action(1), -spec_.max_step, spec_.max_step);
  const double dt = std::clamp(action(2), -spec_.max_turn, spec_.max_turn);
  pose_.x += dx;
  pose_.y += dy;
  pose_.theta = wrap_angle(pose_.theta + dt);
  ++t_;
}

Observation ToyEnv::observe() const {
  if (!has_state_) throw std::logic_error("observe before reset");
  Observation obs;
  const geometry::RigidTransform rel = geometry::compose(
      pose_.transform(), initial_pose_.transform().inverse());
  // Only the tracked object's rows move; static rows and every feature row
  // carry over bit for bit.
  obs.field = field0_;
  for (Eigen::Index i = 0; i < obs.field.points.rows(); ++i) {
    if (point_obj_[static_cast<std::size_t>(i)] != 0) continue;
    obs.field.points.row(i) =
        rel.apply(field0_.points.row(i).transpose()).transpose();
  }
  obs.field.timestep = t_;
  obs.part_indices = parts_;
  obs.robot.resize(kRobotDim);
  obs.robot << pose_.x, pose_.y, 1.0,
      static_cast<double>(t_) / spec_.episode_len;
  obs.pose_true = pose_;
  obs.pose_obs = geometry::RigidTransform::rotation_z(
      wrap_axis(pose_.theta), Eigen::Vector3d(pose_.x, pose_.y, 0.0));
  obs.t = t_;
  return obs;
}

}  // namespace semfield::bench
