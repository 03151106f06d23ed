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

#include "semfield/bench/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "semfield/bench/expert.hpp"
#include "semfield/errors.hpp"
#include "semfield/partition/partition.hpp"
#include "semfield/rng.hpp"

namespace semfield::bench {

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, int cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<int>(row.size()) != cols) {
      throw PersistenceError("trajectory row has wrong width");
    }
    for (int j = 0; j < cols; ++j) m(i, j) = row.at(j).get<double>();
  }
  return m;
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) {
    throw PersistenceError("cannot open for writing: " + path.string());
  }
  out << j.dump(2) << "\n";
  if (!out) throw PersistenceError("write failed: " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PersistenceError("cannot open: " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw PersistenceError("malformed JSON in " + path.string() + ": " +
                           e.what());
  }
}

std::string episode_dirname(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ep_%04d", index);
  return buf;
}

std::vector<int> assignments_from_indices(
    const std::vector<std::vector<int>>& parts, int n) {
  std::vector<int> assignments(static_cast<std::size_t>(n), -1);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (int idx : parts[p]) {
      if (idx < 0 || idx >= n) {
        throw PersistenceError("part index out of range");
      }
      assignments[static_cast<std::size_t>(idx)] = static_cast<int>(p);
    }
  }
  for (int a : assignments) {
    if (a < 0) throw PersistenceError("partition does not cover all points");
  }
  return assignments;
}

std::vector<std::vector<int>> indices_from_assignments(
    const std::vector<int>& assignments, int k) {
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const int p = assignments[i];
    if (p < 0 || p >= k) throw PersistenceError("assignment out of range");
    parts[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
  }
  for (const auto& part : parts) {
    if (part.empty()) throw PersistenceError("empty part in partition file");
  }
  return parts;
}

}  // namespace

void EpisodeRecord::validate() const {
  if (fields.empty()) throw std::invalid_argument("episode has no timesteps");
  const int n = static_cast<int>(fields.front().size());
  for (const auto& f : fields) {
    f.validate();
    if (f.size() != n) {
      throw std::invalid_argument("episode fields change point count");
    }
  }
  const auto len = static_cast<Eigen::Index>(fields.size());
  if (actions.rows() != len || actions.cols() != 4 || robot.rows() != len ||
      robot.cols() != kRobotDim || poses.rows() != len || poses.cols() != 3) {
    throw std::invalid_argument("episode array lengths are inconsistent");
  }
  if (part_indices.empty()) {
    throw std::invalid_argument("episode has no partition");
  }
  (void)assignments_from_indices(part_indices, n);
}

void write_episode(const std::filesystem::path& dir, const EpisodeRecord& ep,
                   const std::string& config_hash) {
  ep.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir / "fields", ec);
  if (ec) {
    throw PersistenceError("cannot create episode directory: " +
                           dir.string());
  }
  semlift::write_field_sequence((dir / "fields").string(), ep.fields);

  nlohmann::json partition;
  partition["k"] = static_cast<int>(ep.part_indices.size());
  partition["assignments"] = assignments_from_indices(
      ep.part_indices, static_cast<int>(ep.fields.front().size()));
  write_json_file(dir / "partition.json", partition);

  nlohmann::json traj;
  traj["actions"] = matrix_json(ep.actions);
  traj["robot"] = matrix_json(ep.robot);
  traj["poses"] = matrix_json(ep.poses);
  write_json_file(dir / "trajectory.json", traj);

  nlohmann::json manifest;
  manifest["seed"] = ep.seed;
  manifest["length"] = ep.length();
  manifest["n_points"] = static_cast<int>(ep.fields.front().size());
  manifest["success"] = ep.success;
  manifest["config_hash"] = config_hash;
  write_json_file(dir / "manifest.json", manifest);
}

EpisodeRecord read_episode(const std::filesystem::path& dir) {
  const nlohmann::json manifest = read_json_file(dir / "manifest.json");
  EpisodeRecord ep;
  try {
    ep.seed = manifest.at("seed").get<std::uint64_t>();
    ep.success = manifest.at("success").get<bool>();
    const int length = manifest.at("length").get<int>();
    ep.fields =
        semlift::read_field_sequence((dir / "fields").string(), length);
    const auto [k, assignments] =
        partition::load_assignments((dir / "partition.json").string());
    ep.part_indices = indices_from_assignments(assignments, k);
    const nlohmann::json traj = read_json_file(dir / "trajectory.json");
    ep.actions = matrix_from_json(traj.at("actions"), 4);
    ep.robot = matrix_from_json(traj.at("robot"), kRobotDim);
    ep.poses = matrix_from_json(traj.at("poses"), 3);
  } catch (const nlohmann::json::exception& e) {
    throw PersistenceError("malformed episode in " + dir.string() + ": " +
                           e.what());
  }
  ep.validate();
  return ep;
}

DatasetSummary generate_dataset(const TaskSpec& spec,
                                const ObservationConfig& obs_cfg,
                                int n_episodes, std::uint64_t seed,
                                const std::filesystem::path& out_dir,
                                const std::string& config_hash) {
  if (n_episodes < 1) throw ConfigError("need at least one episode");
  ToyEnv env(spec, obs_cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw PersistenceError("cannot create dataset directory: " +
                           out_dir.string());
  }

  DatasetSummary summary;
  summary.episodes = n_episodes;
  summary.seed = seed;
  summary.config_hash = config_hash;
  const int L = spec.episode_len;
  for (int e = 0; e < n_episodes; ++e) {
    // Infeasible starts are discarded and redrawn deterministically.
    EpisodeRecord ep;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000) {
        throw ConfigError(
            "expert cannot solve this task within the episode budget");
      }
      const std::uint64_t ep_seed =
          derive_seed(seed, static_cast<std::uint64_t>(e) * 4096 + attempt);
      env.reset(ep_seed);
      const ExpertPlan plan = plan_expert(env.pose(), spec);
      if (!plan.feasible) continue;
      ep = EpisodeRecord{};
      ep.seed = ep_seed;
      ep.actions = plan.actions;
      ep.robot.resize(L, kRobotDim);
      ep.poses.resize(L, 3);
      for (int t = 0; t < L; ++t) {
        Observation obs = env.observe();
        obs.field.timestep = t;
        ep.fields.push_back(std::move(obs.field));
        if (t == 0) ep.part_indices = obs.part_indices;
        ep.robot.row(t) = obs.robot.transpose();
        ep.poses.row(t) << obs.pose_true.x, obs.pose_true.y,
            obs.pose_true.theta;
        env.step(plan.actions.row(t));
      }
      ep.success = env.success();
      if (ep.success) break;
    }
    const std::string name = episode_dirname(e);
    write_episode(out_dir / name, ep, config_hash);
    summary.episode_dirs.push_back(name);
  }

  nlohmann::json manifest;
  manifest["episodes"] = summary.episodes;
  manifest["seed"] = summary.seed;
  manifest["config_hash"] = summary.config_hash;
  manifest["episode_dirs"] = summary.episode_dirs;
  write_json_file(out_dir / "manifest.json", manifest);
  return summary;
}

DatasetSummary read_dataset_manifest(const std::filesystem::path& dir) {
  const nlohmann::json j = read_json_file(dir / "manifest.json");
  DatasetSummary summary;
  try {
    summary.episodes = j.at("episodes").get<int>();
    summary.seed = j.at("seed").get<std::uint64_t>();
    summary.config_hash = j.at("config_hash").get<std::string>();
    summary.episode_dirs =
        j.at("episode_dirs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw PersistenceError("malformed dataset manifest in " + dir.string() +
                           ": " + e.what());
  }
  return summary;
}

std::vector<EpisodeRecord> load_dataset(const std::filesystem::path& dir) {
  const DatasetSummary summary = read_dataset_manifest(dir);
  std::vector<EpisodeRecord> episodes;
  episodes.reserve(summary.episode_dirs.size());
  for (const std::string& name : summary.episode_dirs) {
    episodes.push_back(read_episode(dir / name));
  }
  return episodes;
}

std::vector<policy::TrainItem> episode_items(const EpisodeRecord& ep,
                                             const TaskSpec& spec,
                                             const Toggles& toggles,
                                             int horizon) {
  ep.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const int L = ep.length();
  const Eigen::Index n = ep.fields.front().size();
  const Eigen::Index d2 = ep.fields.front().dim();
  if (d2 % 2 != 0) {
    throw std::invalid_argument("episode features are not two equal blocks");
  }
  const Eigen::Index d = d2 / 2;

  Eigen::MatrixXd norm_actions(L, 4);
  for (int t = 0; t < L; ++t) {
    norm_actions.row(t) =
        normalize_action(Eigen::RowVector4d(ep.actions.row(t)), spec);
  }

  std::vector<std::vector<int>> holistic;
  if (!toggles.part_refine) {
    holistic.emplace_back(static_cast<std::size_t>(n));
    std::iota(holistic.front().begin(), holistic.front().end(), 0);
  }

  std::vector<policy::TrainItem> items;
  items.reserve(static_cast<std::size_t>(L));
  for (int t = 0; t < L; ++t) {
    policy::TrainItem item;
    item.points = ep.fields[static_cast<std::size_t>(t)].points;
    if (toggles.dense_semantic) {
      item.feat_a =
          ep.fields[static_cast<std::size_t>(t)].features.leftCols(d);
      item.feat_b =
          ep.fields[static_cast<std::size_t>(t)].features.rightCols(d);
    } else {
      item.feat_a = Eigen::MatrixXd::Zero(n, d);
      item.feat_b = Eigen::MatrixXd::Zero(n, d);
    }
    item.part_indices = toggles.part_refine ? ep.part_indices : holistic;
    item.robot = ep.robot.row(t).transpose();
    if (toggles.global_pose_condition) {
      item.pose = geometry::RigidTransform::rotation_z(
          wrap_axis(ep.poses(t, 2)),
          Eigen::Vector3d(ep.poses(t, 0), ep.poses(t, 1), 0.0));
    } else {
      item.pose = geometry::RigidTransform::identity();
    }
    item.actions.resize(horizon, 4);
    for (int h = 0; h < horizon; ++h) {
      item.actions.row(h) = norm_actions.row(std::min(t + h, L - 1));
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace semfield::bench
