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

#include "semfield/geometry/fps.hpp"

#include <limits>
#include <stdexcept>

namespace semfield::geometry {

std::vector<int> farthest_point_sample(const PointCloud& cloud, int n,
                                       std::uint64_t seed) {
  cloud.validate();
  const int total = cloud.size();
  if (n < 1 || n > total) {
    throw std::invalid_argument(
        "farthest_point_sample: n must satisfy 1 <= n <= cloud size");
  }

  std::vector<int> selected;
  selected.reserve(n);
  std::vector<bool> taken(total, false);
  const int first = static_cast<int>(seed % static_cast<std::uint64_t>(total));
  selected.push_back(first);
  taken[first] = true;

  // min_sq[i] = squared distance from point i to the selected set. Squared
  // distances order identically to distances, so comparisons are exact.
  std::vector<double> min_sq(total, std::numeric_limits<double>::infinity());
  for (int step = 1; step < n; ++step) {
    const Eigen::RowVector3d last = cloud.points.row(selected.back());
    int best = -1;
    double best_sq = -1.0;
    for (int i = 0; i < total; ++i) {
      const double d = (cloud.points.row(i) - last).squaredNorm();
      if (d < min_sq[i]) {
        min_sq[i] = d;
      }
      // Strict > with an ascending scan breaks ties toward the lowest index.
      if (!taken[i] && min_sq[i] > best_sq) {
        best_sq = min_sq[i];
        best = i;
      }
    }
    selected.push_back(best);
    taken[best] = true;
  }
  return selected;
}

}  // namespace semfield::geometry
