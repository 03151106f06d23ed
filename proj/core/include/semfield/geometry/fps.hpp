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

#ifndef SEMFIELD_GEOMETRY_FPS_HPP_
#define SEMFIELD_GEOMETRY_FPS_HPP_

#include <cstdint>
#include <vector>

#include "semfield/geometry/types.hpp"

namespace semfield::geometry {

// Default downsampling size for dense clouds.
inline constexpr int kDefaultSamplePoints = 1024;

// Greedy farthest point sampling with Euclidean distance. The first point is
// index (seed mod N); each following point maximizes its minimum distance to
// the already-selected set, ties broken by lowest index. Returns the n
// selected indices in selection order.
std::vector<int> farthest_point_sample(const PointCloud& cloud, int n,
                                       std::uint64_t seed);

}  // namespace semfield::geometry

#endif  // SEMFIELD_GEOMETRY_FPS_HPP_
