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

#include "semfield/geometry/types.hpp"

#include <cmath>
#include <stdexcept>

namespace semfield::geometry {

namespace {
constexpr double kOrthonormalTol = 1e-9;
}

void PointCloud::validate() const {
  if (points.rows() < 1) {
    throw std::invalid_argument("PointCloud: point count must be >= 1");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("PointCloud: coordinates must be finite");
  }
}

RigidTransform::RigidTransform(const Eigen::Matrix3d& rotation,
                               const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw std::invalid_argument("RigidTransform: entries must be finite");
  }
  const double ortho_err =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (ortho_err > kOrthonormalTol) {
    throw std::invalid_argument("RigidTransform: rotation not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > kOrthonormalTol) {
    throw std::invalid_argument("RigidTransform: det(R) must be +1");
  }
}

RigidTransform RigidTransform::rotation_z(double angle,
                                          const Eigen::Vector3d& translation) {
  Eigen::Matrix3d r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return RigidTransform(r, translation);
}

RigidTransform RigidTransform::inverse() const {
  return RigidTransform(rotation_.transpose(),
                        -(rotation_.transpose() * translation_));
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform(a.rotation() * b.rotation(),
                        a.rotation() * b.translation() + a.translation());
}

PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud) {
  PointCloud out;
  out.points.resize(cloud.points.rows(), 3);
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
    out.points.row(i) = t.apply(cloud.points.row(i).transpose()).transpose();
  }
  return out;
}

void CameraModel::validate() const {
  if (fx <= 0.0 || fy <= 0.0) {
    throw std::invalid_argument("CameraModel: focal lengths must be > 0");
  }
  if (width < 2 || height < 2) {
    throw std::invalid_argument("CameraModel: width and height must be >= 2");
  }
}

void FeatureMap::validate() const {
  if (dim() < 1) {
    throw std::invalid_argument("FeatureMap: feature dim must be >= 1");
  }
  if (values.rows() != static_cast<Eigen::Index>(height) * width) {
    throw std::invalid_argument("FeatureMap: grid size mismatch");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("FeatureMap: values must be finite");
  }
}

}  // namespace semfield::geometry
