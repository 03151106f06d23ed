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

#include "semfield/semlift/field.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "semfield/errors.hpp"
#include "semfield/geometry/camera.hpp"
#include "semfield/geometry/io.hpp"

namespace semfield::semlift {

void FusionWeights::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("fusion weights must be finite");
  }
}

void SemanticField::validate() const {
  if (points.rows() < 1) {
    throw std::invalid_argument("field must hold at least one point");
  }
  if (features.rows() != points.rows()) {
    throw std::invalid_argument("point and feature counts differ");
  }
  if (!points.allFinite() || !features.allFinite()) {
    throw std::invalid_argument("field contains non-finite values");
  }
}

geometry::FeatureMap fuse(const geometry::FeatureMap& a,
                          const geometry::FeatureMap& b,
                          const FusionWeights& w) {
  a.validate();
  b.validate();
  w.validate();
  if (a.height != b.height || a.width != b.width || a.dim() != b.dim()) {
    throw std::invalid_argument("fused maps must agree in shape");
  }
  geometry::FeatureMap out;
  out.height = a.height;
  out.width = a.width;
  out.values = w.alpha * a.values + w.beta * b.values;
  return out;
}

SemanticField lift(const geometry::PointCloud& cloud,
                   const geometry::CameraModel& cam,
                   const geometry::FeatureMap& fused) {
  cloud.validate();
  cam.validate();
  fused.validate();

  SemanticField field;
  field.points = cloud.points;
  field.features.resize(cloud.size(), fused.dim());
  field.timestep = 0;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    geometry::Projection proj;
    try {
      proj = geometry::project_point(cam, cloud.points.row(i).transpose());
    } catch (const BehindCameraError&) {
      throw BehindCameraError(
          "point " + std::to_string(i) + " is behind the camera",
          static_cast<int>(i));
    }
    field.features.row(i) =
        geometry::bilinear_sample(fused, proj.u, proj.v).value.transpose();
  }
  return field;
}

SemanticField propagate(const SemanticField& field,
                        const geometry::RigidTransform& pose) {
  field.validate();
  SemanticField out;
  out.points = (field.points * pose.rotation().transpose()).rowwise() +
               pose.translation().transpose();
  out.features = field.features;
  out.timestep = field.timestep + 1;
  return out;
}

std::vector<SemanticField> build_field_sequence(
    const SemanticField& initial,
    const std::vector<geometry::RigidTransform>& poses) {
  initial.validate();
  std::vector<SemanticField> sequence;
  sequence.reserve(poses.size() + 1);
  sequence.push_back(initial);
  for (std::size_t t = 0; t < poses.size(); ++t) {
    SemanticField field;
    field.points =
        (initial.points * poses[t].rotation().transpose()).rowwise() +
        poses[t].translation().transpose();
    field.features = initial.features;
    field.timestep = static_cast<int>(t) + 1;
    sequence.push_back(std::move(field));
  }
  return sequence;
}

std::string field_filename(int timestep) {
  if (timestep < 0 || timestep > 9999) {
    throw std::invalid_argument("timestep out of filename range");
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "field_t%04d.txt", timestep);
  return buf;
}

void write_field(const std::string& path, const SemanticField& field) {
  field.validate();
  geometry::write_points_file(path, field.points, field.features);
}

SemanticField read_field(const std::string& path, int timestep) {
  auto [points, features] = geometry::read_points_file(path);
  SemanticField field;
  field.points = points;
  field.features = features;
  field.timestep = timestep;
  field.validate();
  return field;
}

void write_field_sequence(const std::string& dir,
                          const std::vector<SemanticField>& fields) {
  for (const auto& field : fields) {
    write_field(dir + "/" + field_filename(field.timestep), field);
  }
}

std::vector<SemanticField> read_field_sequence(const std::string& dir,
                                               int count) {
  std::vector<SemanticField> fields;
  fields.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) {
    fields.push_back(read_field(dir + "/" + field_filename(t), t));
  }
  return fields;
}

}  // namespace semfield::semlift
