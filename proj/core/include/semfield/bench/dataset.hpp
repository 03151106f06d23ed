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

#ifndef SEMFIELD_BENCH_DATASET_HPP_
#define SEMFIELD_BENCH_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semfield/bench/env.hpp"
#include "semfield/bench/toy.hpp"
#include "semfield/policy/policy.hpp"
#include "semfield/semlift/field.hpp"

namespace semfield::bench {

// One recorded expert episode. Fields are per timestep; the partition is
// computed once at t = 0 and carried by point indices, which stay valid
// because propagation preserves point order.
struct EpisodeRecord {
  std::vector<semlift::SemanticField> fields;
  std::vector<std::vector<int>> part_indices;
  Eigen::MatrixXd actions;  // episode_len x 4, raw units
  Eigen::MatrixXd robot;    // episode_len x kRobotDim
  Eigen::MatrixXd poses;    // episode_len x 3 (x, y, theta)
  std::uint64_t seed = 0;
  bool success = false;

  int length() const { return static_cast<int>(fields.size()); }
  void validate() const;
};

// Component toggles for the ablation study. All on is the full model; each
// switch removes one input pathway at the observation boundary:
//   dense_semantic off   -> per-point features are zeroed
//   global_pose_condition off -> the pose channel reads identity
//   part_refine off      -> one holistic part replaces the K-way split
struct Toggles {
  bool dense_semantic = true;
  bool global_pose_condition = true;
  bool part_refine = true;
};

// Layout inside an episode directory:
//   fields/field_t%04d.txt   per-timestep semantic fields, [A|B] features
//   partition.json           {"k", "assignments"} from the t = 0 split
//   trajectory.json          actions, robot states, true poses
//   manifest.json            seed, length, success, config hash
void write_episode(const std::filesystem::path& dir, const EpisodeRecord& ep,
                   const std::string& config_hash);
EpisodeRecord read_episode(const std::filesystem::path& dir);

struct DatasetSummary {
  int episodes = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> episode_dirs;
};

// Rolls the scripted expert in the environment, keeping only successful
// episodes; episode e uses seed derive_seed(seed, e). Writes one directory
// per episode plus a root manifest.json. Same inputs produce byte-identical
// trees.
DatasetSummary generate_dataset(const TaskSpec& spec,
                                const ObservationConfig& obs_cfg,
                                int n_episodes, std::uint64_t seed,
                                const std::filesystem::path& out_dir,
                                const std::string& config_hash);

DatasetSummary read_dataset_manifest(const std::filesystem::path& dir);
std::vector<EpisodeRecord> load_dataset(const std::filesystem::path& dir);

// Expands one episode into per-timestep training items under the given
// toggles. Action chunks are normalized to [-1, 1] and padded past the end
// of the episode by repeating the last action.
std::vector<policy::TrainItem> episode_items(const EpisodeRecord& ep,
                                             const TaskSpec& spec,
                                             const Toggles& toggles,
                                             int horizon);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_DATASET_HPP_
