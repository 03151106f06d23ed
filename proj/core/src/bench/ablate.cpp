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

#include "semfield/bench/ablate.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "semfield/errors.hpp"
#include "semfield/rng.hpp"

namespace semfield::bench {

std::unique_ptr<policy::PolicyModel> train_policy(
    const std::vector<EpisodeRecord>& episodes, const BenchConfig& cfg,
    const Toggles& toggles, std::ostream* metrics) {
  cfg.validate();
  if (episodes.empty()) throw ConfigError("training needs episodes");

  std::vector<policy::TrainItem> items;
  for (const EpisodeRecord& ep : episodes) {
    std::vector<policy::TrainItem> chunk =
        episode_items(ep, cfg.task, toggles, cfg.policy.horizon);
    for (auto& item : chunk) items.push_back(std::move(item));
  }

  Rng init_rng(derive_seed(cfg.train.seed, 0));
  auto model = std::make_unique<policy::PolicyModel>(cfg.policy, init_rng);
  policy::Trainer trainer(model.get(), cfg.train.lr,
                          derive_seed(cfg.train.seed, 1));
  Rng batch_rng(derive_seed(cfg.train.seed, 2));

  const int n = static_cast<int>(items.size());
  std::vector<const policy::TrainItem*> batch(
      static_cast<std::size_t>(cfg.train.batch));
  for (int step = 0; step < cfg.train.steps; ++step) {
    for (int b = 0; b < cfg.train.batch; ++b) {
      batch[static_cast<std::size_t>(b)] = &items[static_cast<std::size_t>(
          batch_rng.uniform_int(static_cast<std::uint64_t>(n)))];
    }
    const policy::TrainMetrics m = trainer.train_step(batch);
    if (metrics != nullptr &&
        (m.step % cfg.train.log_every == 0 || step + 1 == cfg.train.steps)) {
      *metrics << m.to_jsonl() << "\n";
    }
  }
  return model;
}

std::vector<std::pair<std::string, Toggles>> table_grid() {
  return {
      {"none", {false, false, false}},
      {"dense_only", {true, false, false}},
      {"pose_only", {false, true, false}},
      {"part_only", {false, false, true}},
      {"full", {true, true, true}},
  };
}

std::vector<std::pair<std::string, Toggles>> acceptance_grid() {
  auto grid = table_grid();
  grid.push_back({"global_only", {true, true, false}});
  return grid;
}

std::vector<AblationRow> run_ablation(
    const BenchConfig& cfg,
    const std::vector<std::pair<std::string, Toggles>>& grid,
    const std::vector<EpisodeRecord>& episodes,
    const std::filesystem::path& out_dir, std::ostream* progress) {
  if (grid.empty()) throw ConfigError("ablation grid is empty");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw PersistenceError("cannot create output directory: " +
                           out_dir.string());
  }

  std::vector<AblationRow> rows;
  for (const auto& [name, toggles] : grid) {
    if (progress != nullptr) {
      *progress << "[ablate] training " << name << "\n" << std::flush;
    }
    std::ofstream metrics(out_dir / (name + "_metrics.jsonl"));
    auto model = train_policy(episodes, cfg, toggles, &metrics);
    model->save((out_dir / (name + ".ckpt")).string());

    const PolicyFn fn =
        model_policy(model.get(), cfg.task, toggles, cfg.eval.deterministic);
    AblationRow row;
    row.name = name;
    row.toggles = toggles;
    row.report =
        evaluate(fn, cfg.task, cfg.observation, cfg.eval.episodes_per_seed,
                 cfg.eval.seeds, cfg.eval.replan_every, cfg.config_hash());
    rows.push_back(std::move(row));
    if (progress != nullptr) {
      *progress << "[ablate] " << name << " mean "
                << rows.back().report.mean << "\n"
                << std::flush;
    }
  }

  std::ofstream json_out(out_dir / "ablation.json");
  if (!json_out) throw PersistenceError("cannot write ablation.json");
  json_out << ablation_json(rows) << "\n";
  std::ofstream text_out(out_dir / "ablation.txt");
  if (!text_out) throw PersistenceError("cannot write ablation.txt");
  text_out << ablation_text(rows);
  return rows;
}

std::string ablation_json(const std::vector<AblationRow>& rows) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const AblationRow& row : rows) {
    nlohmann::json r;
    r["name"] = row.name;
    r["toggles"] = {
        {"dense_semantic", row.toggles.dense_semantic},
        {"global_pose_condition", row.toggles.global_pose_condition},
        {"part_refine", row.toggles.part_refine}};
    r["report"] = nlohmann::json::parse(row.report.to_json());
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2);
}

std::string ablation_text(const std::vector<AblationRow>& rows) {
  std::string out;
  out += "dense  pose  part  | mean    std     per-seed\n";
  out += "---------------------------------------------\n";
  char buf[160];
  for (const AblationRow& row : rows) {
    std::string rates;
    for (double r : row.report.success_rates) {
      char rb[16];
      std::snprintf(rb, sizeof(rb), " %.2f", r);
      rates += rb;
    }
    std::snprintf(buf, sizeof(buf), "%-6s %-5s %-5s | %-7.3f %-7.3f%s  (%s)\n",
                  row.toggles.dense_semantic ? "x" : ".",
                  row.toggles.global_pose_condition ? "x" : ".",
                  row.toggles.part_refine ? "x" : ".", row.report.mean,
                  row.report.std_dev, rates.c_str(), row.name.c_str());
    out += buf;
  }
  return out;
}

}  // namespace semfield::bench
