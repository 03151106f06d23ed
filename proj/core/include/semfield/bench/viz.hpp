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

#ifndef SEMFIELD_BENCH_VIZ_HPP_
#define SEMFIELD_BENCH_VIZ_HPP_

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "semfield/semlift/field.hpp"

namespace semfield::bench {

// Projects the features onto their top three principal directions and
// min-max normalizes each channel to [0, 1]. Channels without variance
// (including the constant-feature case) map to 0.5, so a featureless field
// comes out a single mid gray.
Eigen::MatrixXd field_colors(const semlift::SemanticField& field);

// Reads a field file and writes two artifacts:
//   <out_prefix>.txt  one "x y z r g b" line per point, colors in [0, 1]
//   <out_prefix>.ppm  top-down scatter plot, binary P6
// Output is a pure function of the input file.
void visualize_field(const std::string& field_path,
                     const std::filesystem::path& out_prefix);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_VIZ_HPP_
