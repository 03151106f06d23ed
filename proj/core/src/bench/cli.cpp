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

#include "semfield/bench/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semfield/bench/ablate.hpp"
#include "semfield/bench/config.hpp"
#include "semfield/bench/dataset.hpp"
#include "semfield/bench/eval.hpp"
#include "semfield/bench/viz.hpp"
#include "semfield/errors.hpp"
#include "semfield/policy/policy.hpp"
#include "semfield/rng.hpp"

namespace semfield::bench {

namespace {

BenchConfig config_from(const std::string& path) {
  return path.empty() ? default_bench_config() : load_bench_config(path);
}

void require_data_hash(const DatasetSummary& summary, const BenchConfig& cfg) {
  if (summary.config_hash != cfg.data_hash()) {
    throw ConfigError(
        "dataset was generated under a different task/observation config "
        "(dataset " +
        summary.config_hash + ", config " + cfg.data_hash() + ")");
  }
}

int cmd_gen_demos(const std::string& config_path, std::uint64_t seed,
                  bool seed_set, int episodes, const std::string& out,
                  std::ostream& os) {
  BenchConfig cfg = config_from(config_path);
  const std::uint64_t s = seed_set ? seed : 42;
  const DatasetSummary summary = generate_dataset(
      cfg.task, cfg.observation, episodes, s, out, cfg.data_hash());
  os << "wrote " << summary.episodes << " episodes to " << out << " (data "
     << summary.config_hash << ")\n";
  return 0;
}

int cmd_train(const std::string& config_path, std::uint64_t seed,
              bool seed_set, const std::string& data, const std::string& out,
              std::ostream& os) {
  BenchConfig cfg = config_from(config_path);
  if (seed_set) cfg.train.seed = seed;
  const DatasetSummary summary = read_dataset_manifest(data);
  require_data_hash(summary, cfg);
  const std::vector<EpisodeRecord> episodes = load_dataset(data);

  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    throw PersistenceError("cannot create output directory: " + out);
  }
  std::ofstream metrics(std::filesystem::path(out) / "metrics.jsonl");
  if (!metrics) throw PersistenceError("cannot write metrics.jsonl");
  auto model = train_policy(episodes, cfg, cfg.toggles, &metrics);
  const std::string ckpt =
      (std::filesystem::path(out) / "policy.ckpt").string();
  model->save(ckpt);
  os << "trained " << cfg.train.steps << " steps; checkpoint " << ckpt
     << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, std::uint64_t seed,
             bool seed_set, const std::string& ckpt, const std::string& out,
             std::ostream& os) {
  BenchConfig cfg = config_from(config_path);
  if (seed_set) cfg.eval.seeds = {seed};
  Rng rng(derive_seed(cfg.train.seed, 0));
  policy::PolicyModel model(cfg.policy, rng);
  model.load(ckpt);
  const PolicyFn fn =
      model_policy(&model, cfg.task, cfg.toggles, cfg.eval.deterministic);
  const EvalReport report =
      evaluate(fn, cfg.task, cfg.observation, cfg.eval.episodes_per_seed,
               cfg.eval.seeds, cfg.eval.replan_every, cfg.config_hash());
  const std::string json = report.to_json();
  if (out.empty()) {
    os << json << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw PersistenceError("cannot open for writing: " + out);
    f << json << "\n";
    if (!f) throw PersistenceError("write failed: " + out);
    os << "wrote report to " << out << "\n";
  }
  return 0;
}

int cmd_ablate(const std::string& config_path, std::uint64_t seed,
               bool seed_set, const std::string& data, const std::string& out,
               const std::string& grid_name, std::ostream& os) {
  BenchConfig cfg = config_from(config_path);
  if (seed_set) cfg.train.seed = seed;
  const DatasetSummary summary = read_dataset_manifest(data);
  require_data_hash(summary, cfg);
  const std::vector<EpisodeRecord> episodes = load_dataset(data);
  std::vector<std::pair<std::string, Toggles>> grid;
  if (grid_name == "table") {
    grid = table_grid();
  } else if (grid_name == "acceptance") {
    grid = acceptance_grid();
  } else {
    throw ConfigError("unknown grid '" + grid_name + "'");
  }
  const std::vector<AblationRow> rows =
      run_ablation(cfg, grid, episodes, out, &os);
  os << ablation_text(rows);
  return 0;
}

int cmd_viz(const std::string& field, const std::string& out,
            std::ostream& os) {
  visualize_field(field, out);
  os << "wrote " << out << ".txt and " << out << ".ppm\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"pose-aware toy manipulation benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int episodes = 100;
  std::string data_dir, out_path, ckpt_path, field_path;
  std::string grid_name = "table";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config path");
    sub->add_option("--seed", seed, "seed override");
  };

  CLI::App* gen = app.add_subcommand("gen-demos", "record expert episodes");
  add_common(gen);
  gen->add_option("--episodes", episodes, "episode count");
  gen->add_option("--out", out_path, "dataset directory")->required();

  CLI::App* train = app.add_subcommand("train", "train a policy");
  add_common(train);
  train->add_option("--data", data_dir, "dataset directory")->required();
  train->add_option("--out", out_path, "output directory")->required();

  CLI::App* evalc = app.add_subcommand("eval", "closed-loop evaluation");
  add_common(evalc);
  evalc->add_option("--ckpt", ckpt_path, "policy checkpoint")->required();
  evalc->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* ablate = app.add_subcommand("ablate", "run the toggle grid");
  add_common(ablate);
  ablate->add_option("--data", data_dir, "dataset directory")->required();
  ablate->add_option("--out", out_path, "output directory")->required();
  ablate->add_option("--grid", grid_name, "table or acceptance");

  CLI::App* viz = app.add_subcommand("viz-field", "colorize a field file");
  viz->add_option("--config", config_path, "JSON config path");
  viz->add_option("--field", field_path, "field file")->required();
  viz->add_option("--out", out_path, "output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints its own message; help exits cleanly, usage errors are
    // config errors.
    std::ostream& target = e.get_exit_code() == 0 ? out : err;
    const int code = app.exit(e, target, target);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_demos(config_path, seed, gen->count("--seed") > 0,
                           episodes, out_path, out);
    }
    if (train->parsed()) {
      return cmd_train(config_path, seed, train->count("--seed") > 0,
                       data_dir, out_path, out);
    }
    if (evalc->parsed()) {
      return cmd_eval(config_path, seed, evalc->count("--seed") > 0,
                      ckpt_path, out_path, out);
    }
    if (ablate->parsed()) {
      return cmd_ablate(config_path, seed, ablate->count("--seed") > 0,
                        data_dir, out_path, grid_name, out);
    }
    if (viz->parsed()) {
      return cmd_viz(field_path, out_path, out);
    }
    err << "no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PersistenceError& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace semfield::bench
