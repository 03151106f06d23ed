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

#ifndef SEMFIELD_PARTITION_PARTITION_HPP_
#define SEMFIELD_PARTITION_PARTITION_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/semlift/field.hpp"

namespace semfield::partition {

inline constexpr int kDefaultParts = 8;

// Disjoint decomposition of a parent field into parts whose sizes differ by
// at most one. parent_indices[k] lists, for each point of parts[k], its row
// in the parent field, in the part's internal order.
struct LocalFieldSet {
  std::vector<semlift::SemanticField> parts;
  std::vector<std::vector<int>> parent_indices;
  int parent_size = 0;

  int k() const { return static_cast<int>(parts.size()); }
  void validate() const;

  // assignments[i] = part of parent point i.
  std::vector<int> assignments() const;
};

// Splits along the first principal component of standardized [position;
// feature] vectors: each block is centered and scaled to unit average
// column variance, PC1 is oriented by the sign of the projection skewness
// (lowest-index nonzero projection breaks exact-zero skew), points are
// sorted by projection with original index as tiebreak, and the sorted
// order is cut into k contiguous runs, the first N mod k of them one
// longer. The projection-based orientation is what makes the split exactly
// stable under rigid motion of the parent field.
LocalFieldSet partition_pca(const semlift::SemanticField& field, int k);

// Mean Jaccard overlap of the two partitions under the best part-to-part
// permutation; exhaustive for k <= 8, greedy above. 1.0 means identical up
// to part order.
double partition_consistency_check(const LocalFieldSet& a,
                                   const LocalFieldSet& b);

// Regroups parent rows by the given labels; parts keep ascending parent
// order. Labels must cover 0..k-1 with sizes differing by at most one.
LocalFieldSet partition_from_assignments(const semlift::SemanticField& field,
                                         int k,
                                         const std::vector<int>& assignments);

// JSON file {"k": int, "assignments": [int; N]}.
void save_partition(const std::string& path, const LocalFieldSet& set);
std::pair<int, std::vector<int>> load_assignments(const std::string& path);

}  // namespace semfield::partition

#endif  // SEMFIELD_PARTITION_PARTITION_HPP_
