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

#include "semfield/geometry/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "semfield/errors.hpp"

namespace semfield::geometry {

namespace {

// "%.17g" preserves every double bit-exactly through the text round trip.
void append_value(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

}  // namespace

void write_points(std::ostream& os, const Points& points,
                  const Eigen::MatrixXd& features) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = features.size() == 0 ? 0 : features.cols();
  if (d > 0 && features.rows() != n) {
    throw std::invalid_argument("write_points: points/features count mismatch");
  }
  os << n << ' ' << d << '\n';
  std::string line;
  for (Eigen::Index i = 0; i < n; ++i) {
    line.clear();
    for (int c = 0; c < 3; ++c) {
      if (c > 0) line += ' ';
      append_value(line, points(i, c));
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      line += ' ';
      append_value(line, features(i, c));
    }
    line += '\n';
    os << line;
  }
}

std::pair<Points, Eigen::MatrixXd> read_points(std::istream& is) {
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  if (!(is >> n >> d) || n < 0 || d < 0) {
    throw PersistenceError("read_points: malformed header");
  }
  Points points(n, 3);
  Eigen::MatrixXd features(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      if (!(is >> points(i, c))) {
        throw PersistenceError("read_points: truncated point row " +
                               std::to_string(i));
      }
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      if (!(is >> features(i, c))) {
        throw PersistenceError("read_points: truncated feature row " +
                               std::to_string(i));
      }
    }
  }
  return {std::move(points), std::move(features)};
}

void write_points_file(const std::filesystem::path& path, const Points& points,
                       const Eigen::MatrixXd& features) {
  std::ofstream os(path);
  if (!os) {
    throw PersistenceError("cannot open for writing: " + path.string());
  }
  write_points(os, points, features);
  os.flush();
  if (!os) {
    throw PersistenceError("write failed: " + path.string());
  }
}

std::pair<Points, Eigen::MatrixXd> read_points_file(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw PersistenceError("cannot open for reading: " + path.string());
  }
  return read_points(is);
}

void write_point_cloud(const std::filesystem::path& path,
                       const PointCloud& cloud) {
  write_points_file(path, cloud.points, Eigen::MatrixXd());
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  auto [points, features] = read_points_file(path);
  (void)features;
  return PointCloud{std::move(points)};
}

}  // namespace semfield::geometry
