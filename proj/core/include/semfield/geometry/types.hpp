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

#ifndef SEMFIELD_GEOMETRY_TYPES_HPP_
#define SEMFIELD_GEOMETRY_TYPES_HPP_

#include <Eigen/Dense>

namespace semfield::geometry {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Ordered set of 3D points, in meters. All coordinates finite, size >= 1.
struct PointCloud {
  Points points;

  int size() const { return static_cast<int>(points.rows()); }
  void validate() const;
};

// SE(3) pose. The rotation is checked orthonormal with det +1 (both within
// 1e-9) on construction.
class RigidTransform {
 public:
  RigidTransform()
      : rotation_(Eigen::Matrix3d::Identity()),
        translation_(Eigen::Vector3d::Zero()) {}
  RigidTransform(const Eigen::Matrix3d& rotation,
                 const Eigen::Vector3d& translation);

  static RigidTransform identity() { return RigidTransform(); }
  static RigidTransform rotation_z(double angle,
                                   const Eigen::Vector3d& translation =
                                       Eigen::Vector3d::Zero());

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

  RigidTransform inverse() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// (R_a R_b, R_a t_b + t_a): apply b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

// Transforms every point; count and order preserved.
PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud);

// Pinhole camera with a world-to-camera pose. fx, fy > 0; width, height >= 2.
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  RigidTransform world_to_camera;

  void validate() const;
};

// Dense height x width x dim feature grid. Row r = v * width + u holds the
// feature at pixel (u, v).
struct FeatureMap {
  int height = 0;
  int width = 0;
  Eigen::MatrixXd values;  // (height*width) x dim

  int dim() const { return static_cast<int>(values.cols()); }
  Eigen::RowVectorXd at(int v, int u) const {
    return values.row(static_cast<Eigen::Index>(v) * width + u);
  }
  void validate() const;
};

}  // namespace semfield::geometry

#endif  // SEMFIELD_GEOMETRY_TYPES_HPP_
