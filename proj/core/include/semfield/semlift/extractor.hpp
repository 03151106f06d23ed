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

#ifndef SEMFIELD_SEMLIFT_EXTRACTOR_HPP_
#define SEMFIELD_SEMLIFT_EXTRACTOR_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/geometry/types.hpp"

namespace semfield::semlift {

// RGB observation. `rgb` is (height*width) x 3 with pixel (u, v) at row
// v*width + u, channels in [0, 1].
struct Image {
  int height = 0;
  int width = 0;
  Eigen::MatrixXd rgb;

  void validate() const;
};

// Part labels used by the synthetic extractors and the toy renderer.
// Background must stay label 0; renderers paint label k with label_color(k).
inline constexpr int kNumLabels = 4;

Eigen::Vector3d label_color(int label);
int decode_label(const Eigen::Vector3d& rgb);

// Produces a dense per-pixel feature map for an observation. Implementations
// must be deterministic for a fixed input image.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;

  virtual std::string name() const = 0;
  virtual int output_dim() const = 0;
  virtual geometry::FeatureMap extract(const Image& image) const = 0;
};

// Decodes the part label painted into each pixel and emits
// one_hot(label) ++ (u/(W-1), v/(H-1)). Sharp part identity, exact edges.
class LabelOracleExtractor : public FeatureExtractor {
 public:
  std::string name() const override { return "label_oracle"; }
  int output_dim() const override { return kNumLabels + 2; }
  geometry::FeatureMap extract(const Image& image) const override;
};

// Same label decode, then a 3x3 box blur (border replicated) over the
// one-hot channels. Smooth part evidence, complementary to the sharp oracle.
class SmoothOracleExtractor : public FeatureExtractor {
 public:
  std::string name() const override { return "smooth_oracle"; }
  int output_dim() const override { return kNumLabels + 2; }
  geometry::FeatureMap extract(const Image& image) const override;
};

// Serves a feature map computed offline. The array lives in `path` as raw
// little-endian float64, row-major in (v, u, channel) order; a JSON sidecar
// at `path + ".json"` records {"height", "width", "dim", "extractor",
// "layers"?}.
class FileBackedExtractor : public FeatureExtractor {
 public:
  explicit FileBackedExtractor(const std::string& path);

  std::string name() const override { return name_; }
  int output_dim() const override { return static_cast<int>(map_.dim()); }
  geometry::FeatureMap extract(const Image& image) const override;

  const std::vector<int>& layers() const { return layers_; }

 private:
  std::string name_;
  std::vector<int> layers_;
  geometry::FeatureMap map_;
};

// Writes `map` plus its sidecar in the FileBackedExtractor format.
void write_feature_file(const std::string& path,
                        const geometry::FeatureMap& map,
                        const std::string& extractor_name,
                        const std::optional<std::vector<int>>& layers = {});

}  // namespace semfield::semlift

#endif  // SEMFIELD_SEMLIFT_EXTRACTOR_HPP_
