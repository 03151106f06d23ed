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

#include "semfield/partition/partition.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "semfield/errors.hpp"

namespace semfield::partition {
namespace {

// Centers every column, then scales the whole block so the average column
// variance is one. Near-constant blocks are left at zero scale-free.
void standardize_block(Eigen::Ref<Eigen::MatrixXd> block) {
  if (block.cols() == 0) return;
  const Eigen::RowVectorXd mean = block.colwise().mean();
  block.rowwise() -= mean;
  const double denom =
      block.rows() > 1 ? static_cast<double>(block.rows() - 1) : 1.0;
  const double avg_var =
      block.squaredNorm() / (denom * static_cast<double>(block.cols()));
  if (avg_var > 1e-24) {
    block /= std::sqrt(avg_var);
  }
}

double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t hits = 0, ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) {
      ++hits;
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - hits;
  return uni == 0 ? 1.0 : static_cast<double>(hits) / uni;
}

}  // namespace

void LocalFieldSet::validate() const {
  if (parts.empty() || parts.size() != parent_indices.size()) {
    throw std::invalid_argument("part and index lists disagree");
  }
  std::vector<char> seen(parent_size, 0);
  std::size_t min_size = parent_size, max_size = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].size() !=
        static_cast<Eigen::Index>(parent_indices[p].size())) {
      throw std::invalid_argument("part size and index count disagree");
    }
    min_size = std::min(min_size, parent_indices[p].size());
    max_size = std::max(max_size, parent_indices[p].size());
    for (int idx : parent_indices[p]) {
      if (idx < 0 || idx >= parent_size || seen[idx]) {
        throw std::invalid_argument("parts must disjointly cover the parent");
      }
      seen[idx] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("parts must disjointly cover the parent");
  }
  if (max_size - min_size > 1) {
    throw std::invalid_argument("part sizes differ by more than one");
  }
}

std::vector<int> LocalFieldSet::assignments() const {
  std::vector<int> out(parent_size, -1);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (int idx : parent_indices[p]) out[idx] = static_cast<int>(p);
  }
  return out;
}

LocalFieldSet partition_pca(const semlift::SemanticField& field, int k) {
  field.validate();
  const Eigen::Index n = field.size();
  if (k < 1 || k > n) {
    throw std::invalid_argument("part count must lie in [1, N]");
  }

  const Eigen::Index d = field.dim();
  Eigen::MatrixXd aug(n, 3 + d);
  aug.leftCols(3) = field.points;
  aug.rightCols(d) = field.features;
  standardize_block(aug.leftCols(3));
  standardize_block(aug.rightCols(d));

  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = aug.transpose() * aug / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  Eigen::VectorXd pc1 = solver.eigenvectors().col(cov.cols() - 1);

  Eigen::VectorXd t = aug * pc1;
  // Orientation must survive rigid motion of the parent cloud, so decide it
  // from the projections (invariant up to sign), never from pc1's entries.
  const double skew = t.array().cube().sum();
  bool flip = skew < 0.0;
  if (skew == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (t(i) != 0.0) {
        flip = t(i) < 0.0;
        break;
      }
    }
  }
  if (flip) t = -t;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (t(a) != t(b)) return t(a) < t(b);
    return a < b;
  });

  LocalFieldSet set;
  set.parent_size = static_cast<int>(n);
  const Eigen::Index base = n / k;
  const Eigen::Index extra = n % k;
  Eigen::Index cursor = 0;
  for (int p = 0; p < k; ++p) {
    const Eigen::Index size = base + (p < extra ? 1 : 0);
    semlift::SemanticField part;
    part.points.resize(size, 3);
    part.features.resize(size, d);
    part.timestep = field.timestep;
    std::vector<int> indices(size);
    for (Eigen::Index j = 0; j < size; ++j) {
      const int idx = order[cursor++];
      indices[j] = idx;
      part.points.row(j) = field.points.row(idx);
      part.features.row(j) = field.features.row(idx);
    }
    set.parts.push_back(std::move(part));
    set.parent_indices.push_back(std::move(indices));
  }
  return set;
}

double partition_consistency_check(const LocalFieldSet& a,
                                   const LocalFieldSet& b) {
  a.validate();
  b.validate();
  if (a.parent_size != b.parent_size) {
    throw std::invalid_argument("partitions cover different parents");
  }
  if (a.k() != b.k()) {
    throw std::invalid_argument("partitions have different part counts");
  }
  const int k = a.k();

  std::vector<std::vector<int>> sa(a.parent_indices.begin(),
                                   a.parent_indices.end());
  std::vector<std::vector<int>> sb(b.parent_indices.begin(),
                                   b.parent_indices.end());
  for (auto& s : sa) std::sort(s.begin(), s.end());
  for (auto& s : sb) std::sort(s.begin(), s.end());

  Eigen::MatrixXd overlap(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) overlap(i, j) = jaccard(sa[i], sb[j]);
  }

  if (k <= 8) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
      double total = 0.0;
      for (int i = 0; i < k; ++i) total += overlap(i, perm[i]);
      best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / k;
  }

  // Greedy fallback: repeatedly take the best remaining pair.
  std::vector<char> used_a(k, 0), used_b(k, 0);
  double total = 0.0;
  for (int step = 0; step < k; ++step) {
    double best = -1.0;
    int bi = 0, bj = 0;
    for (int i = 0; i < k; ++i) {
      if (used_a[i]) continue;
      for (int j = 0; j < k; ++j) {
        if (used_b[j]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = 1;
    total += best;
  }
  return total / k;
}

LocalFieldSet partition_from_assignments(const semlift::SemanticField& field,
                                         int k,
                                         const std::vector<int>& assignments) {
  field.validate();
  if (k < 1 || static_cast<Eigen::Index>(assignments.size()) != field.size()) {
    throw std::invalid_argument("assignment count must match the field");
  }
  std::vector<std::vector<int>> groups(k);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const int p = assignments[i];
    if (p < 0 || p >= k) {
      throw std::invalid_argument("assignment label out of range");
    }
    groups[p].push_back(static_cast<int>(i));
  }

  LocalFieldSet set;
  set.parent_size = static_cast<int>(field.size());
  for (int p = 0; p < k; ++p) {
    const auto size = static_cast<Eigen::Index>(groups[p].size());
    semlift::SemanticField part;
    part.points.resize(size, 3);
    part.features.resize(size, field.dim());
    part.timestep = field.timestep;
    for (Eigen::Index j = 0; j < size; ++j) {
      part.points.row(j) = field.points.row(groups[p][j]);
      part.features.row(j) = field.features.row(groups[p][j]);
    }
    set.parts.push_back(std::move(part));
    set.parent_indices.push_back(std::move(groups[p]));
  }
  set.validate();
  return set;
}

void save_partition(const std::string& path, const LocalFieldSet& set) {
  set.validate();
  nlohmann::json j;
  j["k"] = set.k();
  j["assignments"] = set.assignments();
  std::ofstream out(path);
  if (!out) throw PersistenceError("cannot open for writing: " + path);
  out << j.dump() << "\n";
  if (!out) throw PersistenceError("write failed: " + path);
}

std::pair<int, std::vector<int>> load_assignments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PersistenceError("cannot open: " + path);
  try {
    nlohmann::json j;
    in >> j;
    return {j.at("k").get<int>(), j.at("assignments").get<std::vector<int>>()};
  } catch (const nlohmann::json::exception& e) {
    throw PersistenceError("malformed partition file " + path + ": " +
                           e.what());
  }
}

}  // namespace semfield::partition
