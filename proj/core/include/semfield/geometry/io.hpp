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

#ifndef SEMFIELD_GEOMETRY_IO_HPP_
#define SEMFIELD_GEOMETRY_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <utility>

#include "semfield/geometry/types.hpp"

namespace semfield::geometry {

// Text format for point data: one header line "N d", then N lines of
// "x y z f_1 ... f_d" (d = 0 for bare clouds). Space-delimited UTF-8 with
// full decimal precision, so values round-trip bit-exactly.
void write_points(std::ostream& os, const Points& points,
                  const Eigen::MatrixXd& features);
std::pair<Points, Eigen::MatrixXd> read_points(std::istream& is);

void write_points_file(const std::filesystem::path& path, const Points& points,
                       const Eigen::MatrixXd& features);
std::pair<Points, Eigen::MatrixXd> read_points_file(
    const std::filesystem::path& path);

void write_point_cloud(const std::filesystem::path& path,
                       const PointCloud& cloud);
PointCloud read_point_cloud(const std::filesystem::path& path);

}  // namespace semfield::geometry

#endif  // SEMFIELD_GEOMETRY_IO_HPP_
