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

#include "semfield/bench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "semfield/errors.hpp"
#include "semfield/hash.hpp"
#include "semfield/semlift/extractor.hpp"

namespace semfield::bench {

namespace {

constexpr double kPi = 3.14159265358979323846;

double from_deg(double d) { return d * kPi / 180.0; }
double to_deg(double r) { return r * 180.0 / kPi; }

void check_keys(const nlohmann::json& j,
                const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError("config section '" + where + "' must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (allowed.find(key) == allowed.end()) {
      throw ConfigError("unknown config key '" + where + "." + key + "'");
    }
  }
}

void parse_task(const nlohmann::json& j, TaskSpec* task) {
  check_keys(j,
             {"name", "object", "distractor", "delta_pos", "delta_ang_deg",
              "range_x", "range_y", "range_theta_deg", "target", "max_step",
              "max_turn_deg", "episode_len"},
             "task");
  if (j.contains("name")) task->name = j.at("name").get<std::string>();
  if (j.contains("object")) {
    const auto id = j.at("object").get<std::string>();
    if (id != "arrow") throw ConfigError("unknown object '" + id + "'");
  }
  const bool distractor = j.contains("distractor")
                              ? j.at("distractor").get<bool>()
                              : task->objects.size() > 1;
  task->objects = {make_arrow_object()};
  if (distractor) task->objects.push_back(make_distractor_object());
  if (j.contains("delta_pos")) {
    task->delta_pos = j.at("delta_pos").get<double>();
  }
  if (j.contains("delta_ang_deg")) {
    task->delta_ang = from_deg(j.at("delta_ang_deg").get<double>());
  }
  if (j.contains("range_x")) task->ranges.x = j.at("range_x").get<double>();
  if (j.contains("range_y")) task->ranges.y = j.at("range_y").get<double>();
  if (j.contains("range_theta_deg")) {
    task->ranges.theta = from_deg(j.at("range_theta_deg").get<double>());
  }
  if (j.contains("target")) {
    const auto& t = j.at("target");
    check_keys(t, {"x", "y", "theta_deg"}, "task.target");
    if (t.contains("x")) task->target.x = t.at("x").get<double>();
    if (t.contains("y")) task->target.y = t.at("y").get<double>();
    if (t.contains("theta_deg")) {
      task->target.theta = from_deg(t.at("theta_deg").get<double>());
    }
  }
  if (j.contains("max_step")) task->max_step = j.at("max_step").get<double>();
  if (j.contains("max_turn_deg")) {
    task->max_turn = from_deg(j.at("max_turn_deg").get<double>());
  }
  if (j.contains("episode_len")) {
    task->episode_len = j.at("episode_len").get<int>();
  }
}

void parse_observation(const nlohmann::json& j, ObservationConfig* obs) {
  check_keys(j,
             {"n_points", "parts", "image_size", "focal", "grid_pitch",
              "fps_seed"},
             "observation");
  if (j.contains("n_points")) obs->n_points = j.at("n_points").get<int>();
  if (j.contains("parts")) obs->parts = j.at("parts").get<int>();
  if (j.contains("image_size")) {
    obs->image_size = j.at("image_size").get<int>();
  }
  if (j.contains("focal")) obs->focal = j.at("focal").get<double>();
  if (j.contains("grid_pitch")) {
    obs->grid_pitch = j.at("grid_pitch").get<double>();
  }
  if (j.contains("fps_seed")) {
    obs->fps_seed = j.at("fps_seed").get<std::uint64_t>();
  }
}

void parse_policy(const nlohmann::json& j, policy::PolicyConfig* cfg) {
  check_keys(j,
             {"horizon", "channels", "stage_mults", "diffusion_steps",
              "beta_start", "beta_end", "action_bound", "d_g", "d_r", "d_e",
              "attention_dim"},
             "policy");
  if (j.contains("horizon")) cfg->horizon = j.at("horizon").get<int>();
  if (j.contains("channels")) cfg->channels = j.at("channels").get<int>();
  if (j.contains("stage_mults")) {
    cfg->stage_mults = j.at("stage_mults").get<std::vector<int>>();
  }
  if (j.contains("diffusion_steps")) {
    cfg->diffusion_steps = j.at("diffusion_steps").get<int>();
  }
  if (j.contains("beta_start")) {
    cfg->beta_start = j.at("beta_start").get<double>();
  }
  if (j.contains("beta_end")) cfg->beta_end = j.at("beta_end").get<double>();
  if (j.contains("action_bound")) {
    cfg->action_bound = j.at("action_bound").get<double>();
  }
  if (j.contains("d_g")) cfg->cond.d_g = j.at("d_g").get<int>();
  if (j.contains("d_r")) cfg->cond.d_r = j.at("d_r").get<int>();
  if (j.contains("d_e")) cfg->cond.d_e = j.at("d_e").get<int>();
  if (j.contains("attention_dim")) {
    cfg->cond.attention_dim = j.at("attention_dim").get<int>();
  }
}

void parse_train(const nlohmann::json& j, TrainConfig* cfg) {
  check_keys(j, {"steps", "batch", "lr", "seed", "log_every"}, "train");
  if (j.contains("steps")) cfg->steps = j.at("steps").get<int>();
  if (j.contains("batch")) cfg->batch = j.at("batch").get<int>();
  if (j.contains("lr")) cfg->lr = j.at("lr").get<double>();
  if (j.contains("seed")) cfg->seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("log_every")) cfg->log_every = j.at("log_every").get<int>();
}

void parse_eval(const nlohmann::json& j, EvalConfig* cfg) {
  check_keys(j,
             {"episodes_per_seed", "seeds", "replan_every", "deterministic"},
             "eval");
  if (j.contains("episodes_per_seed")) {
    cfg->episodes_per_seed = j.at("episodes_per_seed").get<int>();
  }
  if (j.contains("seeds")) {
    cfg->seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  if (j.contains("replan_every")) {
    cfg->replan_every = j.at("replan_every").get<int>();
  }
  if (j.contains("deterministic")) {
    cfg->deterministic = j.at("deterministic").get<bool>();
  }
}

void parse_toggles(const nlohmann::json& j, Toggles* toggles) {
  check_keys(j, {"dense_semantic", "global_pose_condition", "part_refine"},
             "toggles");
  if (j.contains("dense_semantic")) {
    toggles->dense_semantic = j.at("dense_semantic").get<bool>();
  }
  if (j.contains("global_pose_condition")) {
    toggles->global_pose_condition =
        j.at("global_pose_condition").get<bool>();
  }
  if (j.contains("part_refine")) {
    toggles->part_refine = j.at("part_refine").get<bool>();
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (steps < 1) throw ConfigError("train.steps must be >= 1");
  if (batch < 1) throw ConfigError("train.batch must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("train.lr must be positive");
  if (log_every < 1) throw ConfigError("train.log_every must be >= 1");
}

void EvalConfig::validate() const {
  if (episodes_per_seed < 1) {
    throw ConfigError("eval.episodes_per_seed must be >= 1");
  }
  if (seeds.empty()) throw ConfigError("eval.seeds must be non-empty");
  if (replan_every < 1) throw ConfigError("eval.replan_every must be >= 1");
}

void BenchConfig::validate() const {
  task.validate();
  observation.validate();
  train.validate();
  eval.validate();
  if (policy.action_dim != 4) {
    throw ConfigError("the toy action space has exactly 4 channels");
  }
  if (policy.cond.robot_joints != kRobotDim) {
    throw ConfigError("robot_joints must match the toy robot state width");
  }
  if (policy.cond.feature_dim != semlift::kNumLabels + 2) {
    throw ConfigError("feature_dim must match the oracle extractor width");
  }
  if (policy.horizon < 1) throw ConfigError("policy.horizon must be >= 1");
  if (eval.replan_every > policy.horizon) {
    throw ConfigError("eval.replan_every cannot exceed the action horizon");
  }
}

std::string BenchConfig::to_json() const {
  nlohmann::json j;
  j["task"]["name"] = task.name;
  j["task"]["object"] = task.objects.empty() ? "" : task.objects.front().id;
  j["task"]["distractor"] = task.objects.size() > 1;
  j["task"]["delta_pos"] = task.delta_pos;
  j["task"]["delta_ang_deg"] = to_deg(task.delta_ang);
  j["task"]["range_x"] = task.ranges.x;
  j["task"]["range_y"] = task.ranges.y;
  j["task"]["range_theta_deg"] = to_deg(task.ranges.theta);
  j["task"]["target"] = {{"x", task.target.x},
                         {"y", task.target.y},
                         {"theta_deg", to_deg(task.target.theta)}};
  j["task"]["max_step"] = task.max_step;
  j["task"]["max_turn_deg"] = to_deg(task.max_turn);
  j["task"]["episode_len"] = task.episode_len;
  j["observation"] = {{"n_points", observation.n_points},
                      {"parts", observation.parts},
                      {"image_size", observation.image_size},
                      {"focal", observation.focal},
                      {"grid_pitch", observation.grid_pitch},
                      {"fps_seed", observation.fps_seed}};
  j["policy"] = nlohmann::json::parse(policy.to_json());
  j["train"] = {{"steps", train.steps},
                {"batch", train.batch},
                {"lr", train.lr},
                {"seed", train.seed},
                {"log_every", train.log_every}};
  j["eval"] = {{"episodes_per_seed", eval.episodes_per_seed},
               {"seeds", eval.seeds},
               {"replan_every", eval.replan_every},
               {"deterministic", eval.deterministic}};
  j["toggles"] = {{"dense_semantic", toggles.dense_semantic},
                  {"global_pose_condition", toggles.global_pose_condition},
                  {"part_refine", toggles.part_refine}};
  return j.dump();
}

std::string BenchConfig::config_hash() const {
  return fnv1a_hex(to_json());
}

std::string BenchConfig::data_hash() const {
  const nlohmann::json full = nlohmann::json::parse(to_json());
  nlohmann::json j;
  j["task"] = full.at("task");
  j["observation"] = full.at("observation");
  return fnv1a_hex(j.dump());
}

BenchConfig default_bench_config() {
  BenchConfig cfg;
  cfg.task = make_default_task();
  cfg.task.max_turn = from_deg(25.0);

  cfg.policy.horizon = 8;
  cfg.policy.action_dim = 4;
  cfg.policy.channels = 32;
  cfg.policy.stage_mults = {1, 2, 1};
  cfg.policy.diffusion_steps = 50;
  cfg.policy.cond.feature_dim = semlift::kNumLabels + 2;
  cfg.policy.cond.d_g = 24;
  cfg.policy.cond.d_r = 8;
  cfg.policy.cond.d_e = 16;
  cfg.policy.cond.robot_joints = kRobotDim;
  cfg.policy.cond.attention_dim = 16;

  cfg.validate();
  return cfg;
}

BenchConfig parse_bench_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  BenchConfig cfg = default_bench_config();
  try {
    check_keys(j, {"task", "observation", "policy", "train", "eval",
                   "toggles"},
               "config");
    if (j.contains("task")) parse_task(j.at("task"), &cfg.task);
    if (j.contains("observation")) {
      parse_observation(j.at("observation"), &cfg.observation);
    }
    if (j.contains("policy")) parse_policy(j.at("policy"), &cfg.policy);
    if (j.contains("train")) parse_train(j.at("train"), &cfg.train);
    if (j.contains("eval")) parse_eval(j.at("eval"), &cfg.eval);
    if (j.contains("toggles")) parse_toggles(j.at("toggles"), &cfg.toggles);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PersistenceError("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw PersistenceError("read failed: " + path.string());
  return parse_bench_config(buf.str());
}

}  // namespace semfield::bench
