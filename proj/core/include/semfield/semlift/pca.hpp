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

#ifndef SEMFIELD_SEMLIFT_PCA_HPP_
#define SEMFIELD_SEMLIFT_PCA_HPP_

#include <string>

#include <Eigen/Dense>

#include "semfield/geometry/types.hpp"

namespace semfield::semlift {

// Linear reduction of per-pixel features onto the top-d principal
// directions. basis columns are orthonormal; eigenvalues holds the full
// descending spectrum of the sample covariance the projector was fit on.
struct PcaProjector {
  Eigen::VectorXd mean;
  Eigen::MatrixXd basis;
  Eigen::VectorXd eigenvalues;
  int d = 0;
  long sample_count = 0;

  void validate() const;

  // Fraction of total variance captured by the d retained directions.
  double explained_variance_ratio() const;

  Eigen::MatrixXd project_rows(const Eigen::MatrixXd& rows) const;
  Eigen::MatrixXd reconstruct_rows(const Eigen::MatrixXd& reduced) const;
  geometry::FeatureMap project(const geometry::FeatureMap& map) const;
};

// Fits on the pixel-feature distribution of one frame. Deterministic sign
// convention: the largest-magnitude entry of each basis column is positive.
PcaProjector fit_pca(const geometry::FeatureMap& map, int d);

void save_projector(const std::string& path, const PcaProjector& proj);
PcaProjector load_projector(const std::string& path);

}  // namespace semfield::semlift

#endif  // SEMFIELD_SEMLIFT_PCA_HPP_
