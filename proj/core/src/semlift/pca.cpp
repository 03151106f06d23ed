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

#include "semfield/semlift/pca.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "semfield/errors.hpp"

namespace semfield::semlift {
namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw PersistenceError("expected a non-empty JSON matrix");
  }
  const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index nc = static_cast<Eigen::Index>(rows.at(0).size());
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) {
    const auto& row = rows.at(r);
    if (static_cast<Eigen::Index>(row.size()) != nc) {
      throw PersistenceError("ragged JSON matrix");
    }
    for (Eigen::Index c = 0; c < nc; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

}  // namespace

void PcaProjector::validate() const {
  if (d < 1 || basis.cols() != d || basis.rows() != mean.size() ||
      eigenvalues.size() != mean.size()) {
    throw std::invalid_argument("projector shape mismatch");
  }
  if (sample_count < d) {
    throw std::invalid_argument("projector fit on fewer samples than d");
  }
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-6) {
    throw std::invalid_argument("projector basis is not orthonormal");
  }
}

double PcaProjector::explained_variance_ratio() const {
  const double total = eigenvalues.sum();
  if (total <= 0.0) return 1.0;
  return eigenvalues.head(d).sum() / total;
}

Eigen::MatrixXd PcaProjector::project_rows(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean.size()) {
    throw std::invalid_argument("row dimension does not match projector");
  }
  return (rows.rowwise() - mean.transpose()) * basis;
}

Eigen::MatrixXd PcaProjector::reconstruct_rows(
    const Eigen::MatrixXd& reduced) const {
  if (reduced.cols() != d) {
    throw std::invalid_argument("reduced dimension does not match projector");
  }
  return (reduced * basis.transpose()).rowwise() + mean.transpose();
}

geometry::FeatureMap PcaProjector::project(
    const geometry::FeatureMap& map) const {
  map.validate();
  geometry::FeatureMap out;
  out.height = map.height;
  out.width = map.width;
  out.values = project_rows(map.values);
  return out;
}

PcaProjector fit_pca(const geometry::FeatureMap& map, int d) {
  map.validate();
  const Eigen::Index n = map.values.rows();
  const Eigen::Index dim = map.values.cols();
  if (d < 1 || d > dim) {
    throw std::invalid_argument("target dimension out of range");
  }
  if (n < d) {
    throw std::invalid_argument("need at least d pixels to fit");
  }

  PcaProjector proj;
  proj.d = d;
  proj.sample_count = static_cast<long>(n);
  proj.mean = map.values.colwise().mean();
  const Eigen::MatrixXd centered = map.values.rowwise() - proj.mean.transpose();
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = centered.transpose() * centered / denom;

  // SelfAdjointEigenSolver returns ascending eigenvalues; flip to descending.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  proj.eigenvalues = solver.eigenvalues().reverse();
  proj.basis.resize(dim, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd col = solver.eigenvectors().col(dim - 1 - j);
    Eigen::Index widest = 0;
    col.cwiseAbs().maxCoeff(&widest);
    if (col(widest) < 0.0) col = -col;
    proj.basis.col(j) = col;
  }
  return proj;
}

void save_projector(const std::string& path, const PcaProjector& proj) {
  proj.validate();
  nlohmann::json j;
  j["d"] = proj.d;
  j["sample_count"] = proj.sample_count;
  j["mean"] = std::vector<double>(proj.mean.begin(), proj.mean.end());
  j["eigenvalues"] =
      std::vector<double>(proj.eigenvalues.begin(), proj.eigenvalues.end());
  j["basis"] = matrix_to_json(proj.basis);
  std::ofstream out(path);
  if (!out) throw PersistenceError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw PersistenceError("write failed: " + path);
}

PcaProjector load_projector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PersistenceError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
    PcaProjector proj;
    proj.d = j.at("d").get<int>();
    proj.sample_count = j.at("sample_count").get<long>();
    const auto mean = j.at("mean").get<std::vector<double>>();
    proj.mean = Eigen::Map<const Eigen::VectorXd>(
        mean.data(), static_cast<Eigen::Index>(mean.size()));
    const auto evals = j.at("eigenvalues").get<std::vector<double>>();
    proj.eigenvalues = Eigen::Map<const Eigen::VectorXd>(
        evals.data(), static_cast<Eigen::Index>(evals.size()));
    proj.basis = matrix_from_json(j.at("basis"));
    proj.validate();
    return proj;
  } catch (const nlohmann::json::exception& e) {
    throw PersistenceError("malformed projector file " + path + ": " +
                           e.what());
  }
}

}  // namespace semfield::semlift
