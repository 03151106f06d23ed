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

#include "semfield/bench/viz.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <vector>

#include "semfield/errors.hpp"

namespace semfield::bench {

namespace {

constexpr int kImageSize = 256;
constexpr int kSplat = 1;  // half-width of the square drawn per point

void write_text_cloud(const std::filesystem::path& path,
                      const semlift::SemanticField& field,
                      const Eigen::MatrixXd& colors) {
  std::ofstream out(path);
  if (!out) {
    throw PersistenceError("cannot open for writing: " + path.string());
  }
  char buf[160];
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.6f %.6f %.6f\n",
                  field.points(i, 0), field.points(i, 1), field.points(i, 2),
                  colors(i, 0), colors(i, 1), colors(i, 2));
    out << buf;
  }
  if (!out) throw PersistenceError("write failed: " + path.string());
}

void write_scatter_ppm(const std::filesystem::path& path,
                       const semlift::SemanticField& field,
                       const Eigen::MatrixXd& colors) {
  double x_lo = field.points.col(0).minCoeff();
  double x_hi = field.points.col(0).maxCoeff();
  double y_lo = field.points.col(1).minCoeff();
  double y_hi = field.points.col(1).maxCoeff();
  const double span = std::max({x_hi - x_lo, y_hi - y_lo, 1e-6});
  const double margin = 0.05 * span;
  x_lo -= margin;
  y_lo -= margin;
  const double scale = (kImageSize - 1) / (span + 2.0 * margin);

  std::vector<unsigned char> pixels(
      static_cast<std::size_t>(kImageSize) * kImageSize * 3, 255);
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    const int u =
        static_cast<int>(std::lround((field.points(i, 0) - x_lo) * scale));
    // Image rows grow downward while world y grows upward.
    const int v = kImageSize - 1 -
                  static_cast<int>(
                      std::lround((field.points(i, 1) - y_lo) * scale));
    for (int dv = -kSplat; dv <= kSplat; ++dv) {
      for (int du = -kSplat; du <= kSplat; ++du) {
        const int uu = u + du, vv = v + dv;
        if (uu < 0 || uu >= kImageSize || vv < 0 || vv >= kImageSize) {
          continue;
        }
        const std::size_t base =
            (static_cast<std::size_t>(vv) * kImageSize + uu) * 3;
        for (int c = 0; c < 3; ++c) {
          pixels[base + static_cast<std::size_t>(c)] =
              static_cast<unsigned char>(
                  std::lround(255.0 * std::clamp(colors(i, c), 0.0, 1.0)));
        }
      }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw PersistenceError("cannot open for writing: " + path.string());
  }
  out << "P6\n" << kImageSize << " " << kImageSize << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw PersistenceError("write failed: " + path.string());
}

}  // namespace

Eigen::MatrixXd field_colors(const semlift::SemanticField& field) {
  field.validate();
  const Eigen::Index n = field.size();
  const Eigen::Index d = field.dim();
  const Eigen::RowVectorXd mean = field.features.colwise().mean();
  const Eigen::MatrixXd centered = field.features.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / std::max<Eigen::Index>(1, n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

  Eigen::MatrixXd colors(n, 3);
  for (int c = 0; c < 3; ++c) {
    // Eigenvalues come out ascending; channel c takes the (c+1)-th largest.
    const Eigen::Index which = d - 1 - c;
    if (which < 0 || eig.eigenvalues()(which) <= 1e-12) {
      colors.col(c).setConstant(0.5);
      continue;
    }
    const Eigen::VectorXd proj = centered * eig.eigenvectors().col(which);
    const double lo = proj.minCoeff(), hi = proj.maxCoeff();
    if (hi - lo <= 1e-12) {
      colors.col(c).setConstant(0.5);
    } else {
      colors.col(c) = (proj.array() - lo) / (hi - lo);
    }
  }
  return colors;
}

void visualize_field(const std::string& field_path,
                     const std::filesystem::path& out_prefix) {
  const semlift::SemanticField field = semlift::read_field(field_path);
  const Eigen::MatrixXd colors = field_colors(field);
  const std::filesystem::path parent = out_prefix.parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) {
      throw PersistenceError("cannot create output directory: " +
                             parent.string());
    }
  }
  write_text_cloud(out_prefix.string() + ".txt", field, colors);
  write_scatter_ppm(out_prefix.string() + ".ppm", field, colors);
}

}  // namespace semfield::bench
