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

#include "semfield/semlift/extractor.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "semfield/errors.hpp"

namespace semfield::semlift {
namespace {

const Eigen::Matrix<double, kNumLabels, 3> kPalette =
    (Eigen::Matrix<double, kNumLabels, 3>() << 0, 0, 0,  // background
     1, 0, 0,                                            // body
     0, 1, 0,                                            // head
     0, 0, 1)                                            // tail
        .finished();

double axis_norm(int coord, int extent) {
  return extent > 1 ? static_cast<double>(coord) / (extent - 1) : 0.0;
}

Eigen::MatrixXd decode_one_hot(const Image& image) {
  Eigen::MatrixXd one_hot =
      Eigen::MatrixXd::Zero(image.rgb.rows(), kNumLabels);
  for (Eigen::Index r = 0; r < image.rgb.rows(); ++r) {
    one_hot(r, decode_label(image.rgb.row(r).transpose())) = 1.0;
  }
  return one_hot;
}

void append_pixel_coords(const Image& image, geometry::FeatureMap* map) {
  const Eigen::Index base = map->values.cols() - 2;
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const Eigen::Index r = static_cast<Eigen::Index>(v) * image.width + u;
      map->values(r, base) = axis_norm(u, image.width);
      map->values(r, base + 1) = axis_norm(v, image.height);
    }
  }
}

}  // namespace

void Image::validate() const {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  if (rgb.rows() != static_cast<Eigen::Index>(height) * width ||
      rgb.cols() != 3) {
    throw std::invalid_argument("image buffer shape mismatch");
  }
  if (!rgb.allFinite()) {
    throw std::invalid_argument("image contains non-finite values");
  }
}

Eigen::Vector3d label_color(int label) {
  if (label < 0 || label >= kNumLabels) {
    throw std::invalid_argument("label out of range");
  }
  return kPalette.row(label).transpose();
}

int decode_label(const Eigen::Vector3d& rgb) {
  int best = 0;
  double best_sq = (kPalette.row(0).transpose() - rgb).squaredNorm();
  for (int k = 1; k < kNumLabels; ++k) {
    const double sq = (kPalette.row(k).transpose() - rgb).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = k;
    }
  }
  return best;
}

geometry::FeatureMap LabelOracleExtractor::extract(const Image& image) const {
  image.validate();
  geometry::FeatureMap map;
  map.height = image.height;
  map.width = image.width;
  map.values.resize(image.rgb.rows(), output_dim());
  map.values.leftCols(kNumLabels) = decode_one_hot(image);
  append_pixel_coords(image, &map);
  return map;
}

geometry::FeatureMap SmoothOracleExtractor::extract(const Image& image) const {
  image.validate();
  const Eigen::MatrixXd one_hot = decode_one_hot(image);
  geometry::FeatureMap map;
  map.height = image.height;
  map.width = image.width;
  map.values.resize(image.rgb.rows(), output_dim());
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(kNumLabels);
      for (int dv = -1; dv <= 1; ++dv) {
        for (int du = -1; du <= 1; ++du) {
          const int vv = std::clamp(v + dv, 0, image.height - 1);
          const int uu = std::clamp(u + du, 0, image.width - 1);
          acc += one_hot.row(static_cast<Eigen::Index>(vv) * image.width + uu);
        }
      }
      map.values.row(static_cast<Eigen::Index>(v) * image.width + u)
          .head(kNumLabels) = acc / 9.0;
    }
  }
  append_pixel_coords(image, &map);
  return map;
}

FileBackedExtractor::FileBackedExtractor(const std::string& path) {
  const std::string sidecar_path = path + ".json";
  std::ifstream sidecar(sidecar_path);
  if (!sidecar) {
    throw IngestionError("cannot open feature sidecar: " + sidecar_path);
  }
  nlohmann::json meta;
  try {
    sidecar >> meta;
    map_.height = meta.at("height").get<int>();
    map_.width = meta.at("width").get<int>();
    const int dim = meta.at("dim").get<int>();
    name_ = meta.at("extractor").get<std::string>();
    if (meta.contains("layers")) {
      layers_ = meta.at("layers").get<std::vector<int>>();
    }
    if (map_.height < 1 || map_.width < 1 || dim < 1) {
      throw IngestionError("non-positive shape in sidecar: " + sidecar_path);
    }
    map_.values.resize(static_cast<Eigen::Index>(map_.height) * map_.width,
                       dim);
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError("malformed feature sidecar " + sidecar_path + ": " +
                         e.what());
  }

  std::ifstream data(path, std::ios::binary);
  if (!data) {
    throw IngestionError("cannot open feature file: " + path);
  }
  data.seekg(0, std::ios::end);
  const auto actual = static_cast<std::uint64_t>(data.tellg());
  const std::uint64_t expected =
      static_cast<std::uint64_t>(map_.values.size()) * sizeof(double);
  if (actual != expected) {
    throw IngestionError("feature file " + path + " holds " +
                         std::to_string(actual) + " bytes, expected " +
                         std::to_string(expected));
  }
  data.seekg(0);
  // File order is (v, u, channel); values is column-major in memory.
  for (Eigen::Index r = 0; r < map_.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < map_.values.cols(); ++c) {
      double x = 0;
      data.read(reinterpret_cast<char*>(&x), sizeof(double));
      map_.values(r, c) = x;
    }
  }
  if (!data) {
    throw IngestionError("short read on feature file: " + path);
  }
  map_.validate();
}

geometry::FeatureMap FileBackedExtractor::extract(const Image& image) const {
  if (image.height != map_.height || image.width != map_.width) {
    throw std::invalid_argument("image dimensions do not match feature file");
  }
  return map_;
}

void write_feature_file(const std::string& path,
                        const geometry::FeatureMap& map,
                        const std::string& extractor_name,
                        const std::optional<std::vector<int>>& layers) {
  map.validate();
  std::ofstream data(path, std::ios::binary);
  if (!data) {
    throw PersistenceError("cannot open for writing: " + path);
  }
  for (Eigen::Index r = 0; r < map.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.values.cols(); ++c) {
      const double x = map.values(r, c);
      data.write(reinterpret_cast<const char*>(&x), sizeof(double));
    }
  }
  if (!data) {
    throw PersistenceError("write failed: " + path);
  }

  nlohmann::json meta;
  meta["height"] = map.height;
  meta["width"] = map.width;
  meta["dim"] = static_cast<int>(map.dim());
  meta["extractor"] = extractor_name;
  if (layers) {
    meta["layers"] = *layers;
  }
  std::ofstream sidecar(path + ".json");
  if (!sidecar) {
    throw PersistenceError("cannot open for writing: " + path + ".json");
  }
  sidecar << meta.dump(2) << "\n";
  if (!sidecar) {
    throw PersistenceError("write failed: " + path + ".json");
  }
}

}  // namespace semfield::semlift
