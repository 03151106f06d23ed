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

#ifndef SEMFIELD_SEMLIFT_FIELD_HPP_
#define SEMFIELD_SEMLIFT_FIELD_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/geometry/types.hpp"

namespace semfield::semlift {

// Learnable balance between the two reduced feature streams.
struct FusionWeights {
  double alpha = 0.5;
  double beta = 0.5;

  void validate() const;
};

// Point cloud carrying one feature vector per point.
struct SemanticField {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  Eigen::MatrixXd features;
  int timestep = 0;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  void validate() const;
};

// Elementwise alpha*A + beta*B. Maps must agree in height, width and dim.
geometry::FeatureMap fuse(const geometry::FeatureMap& a,
                          const geometry::FeatureMap& b,
                          const FusionWeights& w);

// Projects each point through `cam` and bilinearly samples `fused` at the
// image location. Points with non-positive depth raise BehindCameraError
// carrying the offending point index. The result is stamped timestep 0.
SemanticField lift(const geometry::PointCloud& cloud,
                   const geometry::CameraModel& cam,
                   const geometry::FeatureMap& fused);

// Moves positions by `pose` and increments the timestep. Features are the
// same values in the same order, bit for bit.
SemanticField propagate(const SemanticField& field,
                        const geometry::RigidTransform& pose);

// Expands an initial field through per-timestep object poses. poses[t] maps
// the t=0 object frame to the world frame at timestep t+1 (absolute, not
// incremental); element 0 of the result is `initial` itself.
std::vector<SemanticField> build_field_sequence(
    const SemanticField& initial,
    const std::vector<geometry::RigidTransform>& poses);

// Field files are named field_t{t:04}.txt inside a sequence directory.
std::string field_filename(int timestep);

void write_field(const std::string& path, const SemanticField& field);
SemanticField read_field(const std::string& path, int timestep = 0);

void write_field_sequence(const std::string& dir,
                          const std::vector<SemanticField>& fields);
std::vector<SemanticField> read_field_sequence(const std::string& dir,
                                               int count);

}  // namespace semfield::semlift

#endif  // SEMFIELD_SEMLIFT_FIELD_HPP_
