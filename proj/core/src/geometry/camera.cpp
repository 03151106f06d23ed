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

#include "semfield/geometry/camera.hpp"

#include <algorithm>
#include <cmath>

#include "semfield/errors.hpp"

namespace semfield::geometry {

namespace {
constexpr double kMinDepth = 1e-9;
}

Projection project_point(const CameraModel& cam,
                         const Eigen::Vector3d& point) {
  cam.validate();
  const Eigen::Vector3d p = cam.world_to_camera.apply(point);
  if (p.z() <= kMinDepth) {
    throw BehindCameraError("project_point: point behind camera");
  }
  Projection out;
  out.u = cam.fx * p.x() / p.z() + cam.cx;
  out.v = cam.fy * p.y() / p.z() + cam.cy;
  out.depth = p.z();
  return out;
}

Eigen::Vector3d unproject(const CameraModel& cam, double u, double v,
                          double depth) {
  cam.validate();
  return {(u - cam.cx) / cam.fx * depth, (v - cam.cy) / cam.fy * depth, depth};
}

SampledFeature bilinear_sample(const FeatureMap& map, double u, double v) {
  map.validate();
  SampledFeature out;
  const double max_u = static_cast<double>(map.width - 1);
  const double max_v = static_cast<double>(map.height - 1);
  double cu = u;
  double cv = v;
  if (cu < 0.0 || cu > max_u || cv < 0.0 || cv > max_v) {
    out.clamped = true;
    cu = std::clamp(cu, 0.0, max_u);
    cv = std::clamp(cv, 0.0, max_v);
  }

  const int u0 = std::min(static_cast<int>(std::floor(cu)), map.width - 2 >= 0
                                                                ? map.width - 2
                                                                : 0);
  const int v0 = std::min(static_cast<int>(std::floor(cv)),
                          map.height - 2 >= 0 ? map.height - 2 : 0);
  const int u1 = std::min(u0 + 1, map.width - 1);
  const int v1 = std::min(v0 + 1, map.height - 1);
  const double fu = cu - u0;
  const double fv = cv - v0;

  out.value = ((1.0 - fu) * (1.0 - fv) * map.at(v0, u0) +
               fu * (1.0 - fv) * map.at(v0, u1) +
               (1.0 - fu) * fv * map.at(v1, u0) + fu * fv * map.at(v1, u1))
                  .transpose();
  return out;
}

}  // namespace semfield::geometry
