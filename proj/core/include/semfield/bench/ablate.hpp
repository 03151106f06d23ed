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

#ifndef SEMFIELD_BENCH_ABLATE_HPP_
#define SEMFIELD_BENCH_ABLATE_HPP_

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "semfield/bench/config.hpp"
#include "semfield/bench/dataset.hpp"
#include "semfield/bench/eval.hpp"
#include "semfield/policy/policy.hpp"

namespace semfield::bench {

// Trains a fresh policy on the episodes under the given toggles. Model
// initialization and batch order depend only on cfg.train.seed, so two rows
// of an ablation differ in their inputs, never in their draw sequences.
// Metrics lines go to *metrics as JSONL when provided.
std::unique_ptr<policy::PolicyModel> train_policy(
    const std::vector<EpisodeRecord>& episodes, const BenchConfig& cfg,
    const Toggles& toggles, std::ostream* metrics = nullptr);

struct AblationRow {
  std::string name;
  Toggles toggles;
  EvalReport report;
};

// The standard five-row grid: the all-off baseline, each component alone,
// and the full model.
std::vector<std::pair<std::string, Toggles>> table_grid();
// The standard grid plus the global-only row (all but part refinement),
// which the directional comparison is measured against.
std::vector<std::pair<std::string, Toggles>> acceptance_grid();

// Train + evaluate once per grid row on a shared dataset. Writes
// ablation.json, ablation.txt, and one checkpoint per row into out_dir.
std::vector<AblationRow> run_ablation(
    const BenchConfig& cfg,
    const std::vector<std::pair<std::string, Toggles>>& grid,
    const std::vector<EpisodeRecord>& episodes,
    const std::filesystem::path& out_dir, std::ostream* progress = nullptr);

std::string ablation_json(const std::vector<AblationRow>& rows);
std::string ablation_text(const std::vector<AblationRow>& rows);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_ABLATE_HPP_
