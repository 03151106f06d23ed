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

#ifndef SEMFIELD_GEOMETRY_CAMERA_HPP_
#define SEMFIELD_GEOMETRY_CAMERA_HPP_

#include "semfield/geometry/types.hpp"

namespace semfield::geometry {

struct Projection {
  double u = 0.0;      // pixels
  double v = 0.0;      // pixels
  double depth = 0.0;  // meters, camera-frame z
};

// Pinhole projection of a world point. Throws BehindCameraError when the
// camera-frame depth is <= 1e-9.
Projection project_point(const CameraModel& cam, const Eigen::Vector3d& point);

// Inverse of project_point up to the camera frame: returns the camera-frame
// point at pixel (u, v) and the given depth.
Eigen::Vector3d unproject(const CameraModel& cam, double u, double v,
                          double depth);

struct SampledFeature {
  Eigen::VectorXd value;
  bool clamped = false;  // set when (u, v) was clamped to the map border
};

// Bilinear blend of the four surrounding grid cells. Coordinates outside
// [0, width-1] x [0, height-1] are clamped to the border and flagged.
SampledFeature bilinear_sample(const FeatureMap& map, double u, double v);

}  // namespace semfield::geometry

#endif  // SEMFIELD_GEOMETRY_CAMERA_HPP_
