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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semfield/bench/ablate.hpp"
#include "semfield/bench/cli.hpp"
#include "semfield/bench/config.hpp"
#include "semfield/bench/dataset.hpp"
#include "semfield/bench/env.hpp"
#include "semfield/bench/eval.hpp"
#include "semfield/bench/expert.hpp"
#include "semfield/bench/toy.hpp"
#include "semfield/bench/viz.hpp"
#include "semfield/errors.hpp"
#include "semfield/rng.hpp"
#include "semfield/semlift/extractor.hpp"
#include "semfield/semlift/field.hpp"
#include "support/ks.hpp"

using namespace semfield;
using namespace semfield::bench;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("semfield_bench_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Relative path -> file bytes, for whole-tree determinism checks.
std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
  }
  return out;
}

PlanarPose rotated_about_origin(const PlanarPose& p, double phi) {
  PlanarPose q;
  q.x = std::cos(phi) * p.x - std::sin(phi) * p.y;
  q.y = std::sin(phi) * p.x + std::cos(phi) * p.y;
  q.theta = p.theta + phi;
  return q;
}

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t =
      std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Distance from a body point to the nearest outline edge or label
// threshold. Points with a large margin must get exact one-hot features.
double label_margin(const ToyObject& obj, const Eigen::Vector2d& p) {
  double d = std::min(std::abs(p.x() - obj.head_min_x),
                      std::abs(p.x() - obj.tail_max_x));
  const int m = static_cast<int>(obj.vertices.rows());
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector2d a = obj.vertices.row(i);
    const Eigen::Vector2d b = obj.vertices.row((i + 1) % m);
    d = std::min(d, point_segment_distance(p, a, b));
  }
  return d;
}

// Small, fast model settings for smoke tests. Keeps the observation and
// task contracts of the defaults but shrinks every capacity knob.
BenchConfig tiny_config() {
  BenchConfig cfg = default_bench_config();
  cfg.observation.n_points = 24;
  cfg.observation.parts = 4;
  cfg.observation.grid_pitch = 0.01;
  cfg.policy.channels = 8;
  cfg.policy.stage_mults = {1};
  cfg.policy.diffusion_steps = 5;
  cfg.policy.cond.d_g = 8;
  cfg.policy.cond.d_r = 4;
  cfg.policy.cond.d_e = 6;
  cfg.policy.cond.attention_dim = 4;
  cfg.train.steps = 20;
  cfg.train.batch = 4;
  cfg.train.log_every = 5;
  cfg.eval.episodes_per_seed = 2;
  cfg.eval.seeds = {1};
  cfg.validate();
  return cfg;
}

std::string tiny_config_json() {
  return R"({
    "observation": {"n_points": 24, "parts": 4, "grid_pitch": 0.01},
    "policy": {"channels": 8, "stage_mults": [1], "diffusion_steps": 5,
               "d_g": 8, "d_r": 4, "d_e": 6, "attention_dim": 4},
    "train": {"steps": 20, "batch": 4, "log_every": 5},
    "eval": {"episodes_per_seed": 2, "seeds": [1]}
  })";
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int rc =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Angles, poses, actions

TEST_CASE("wrap_angle maps into the half-open full turn") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(wrap_angle(-5.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-20.0, 20.0);
    const double w = wrap_angle(a);
    CHECK(w > -kPi - 1e-15);
    CHECK(w <= kPi + 1e-15);
    CHECK(std::abs(wrap_angle(a + 2.0 * kPi) - w) < 1e-9);
    CHECK(std::remainder(a - w, 2.0 * kPi) == doctest::Approx(0.0));
  }
}

TEST_CASE("wrap_axis folds angles modulo a half turn") {
  CHECK(wrap_axis(0.3) == doctest::Approx(0.3));
  CHECK(wrap_axis(0.3 + kPi) == doctest::Approx(0.3));
  CHECK(wrap_axis(kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(wrap_axis(3.0 * kPi / 4.0) == doctest::Approx(-kPi / 4.0));
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-20.0, 20.0);
    const double w = wrap_axis(a);
    CHECK(w >= -kPi / 2.0 - 1e-15);
    CHECK(w < kPi / 2.0 + 1e-15);
    // The whole point of the axis form: a half turn is invisible.
    CHECK(std::abs(wrap_axis(a + kPi) - w) < 1e-9);
  }
}

TEST_CASE("arrow object is a valid, genuinely asymmetric polygon") {
  const ToyObject obj = make_arrow_object();
  CHECK_NOTHROW(obj.validate());
  CHECK(obj.area() > 0.0);

  CHECK(obj.contains({0.0, 0.0}));
  CHECK(obj.contains({0.08, 0.0}));  // inside the nose
  CHECK_FALSE(obj.contains({0.12, 0.0}));
  CHECK_FALSE(obj.contains({0.0, 0.05}));
  CHECK_FALSE(obj.contains({-0.1, 0.0}));

  CHECK(obj.label_at({0.05, 0.0}) == 2);
  CHECK(obj.label_at({-0.05, 0.0}) == 3);
  CHECK(obj.label_at({0.0, 0.0}) == 1);

  const auto grid = obj.surface_grid(0.008);
  REQUIRE(grid.rows() > 50);
  bool saw_head = false;
  bool saw_tail = false;
  for (int i = 0; i < grid.rows(); ++i) {
    const Eigen::Vector2d p = grid.row(i);
    CHECK(obj.contains(p));
    const int label = obj.label_at(p);
    saw_head = saw_head || label == 2;
    saw_tail = saw_tail || label == 3;
  }
  CHECK(saw_head);
  CHECK(saw_tail);

  // A half turn must not map the outline onto itself, otherwise geometry
  // alone could never reveal the heading.
  bool escapes = false;
  for (int i = 0; i < grid.rows() && !escapes; ++i) {
    escapes = !obj.contains(Eigen::Vector2d(-grid(i, 0), -grid(i, 1)));
  }
  CHECK(escapes);

  // Deterministic sampling.
  CHECK(obj.surface_grid(0.008) == grid);
}

TEST_CASE("object validation rejects malformed shapes") {
  ToyObject obj = make_arrow_object();

  ToyObject two = obj;
  two.vertices = obj.vertices.topRows(2);
  CHECK_THROWS_AS(two.validate(), ConfigError);

  ToyObject cw = obj;
  cw.vertices = obj.vertices.colwise().reverse().eval();
  CHECK_THROWS_AS(cw.validate(), ConfigError);

  ToyObject same = obj;
  same.tail_vertex = same.head_vertex;
  CHECK_THROWS_AS(same.validate(), ConfigError);

  ToyObject inverted = obj;
  inverted.head_min_x = inverted.tail_max_x - 0.01;
  CHECK_THROWS_AS(inverted.validate(), ConfigError);

  ToyObject oob = obj;
  oob.head_vertex = 99;
  CHECK_THROWS_AS(oob.validate(), ConfigError);
}

TEST_CASE("task spec validation") {
  TaskSpec spec = make_default_task();
  CHECK_NOTHROW(spec.validate());

  TaskSpec bad = spec;
  bad.delta_pos = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = spec;
  bad.delta_ang = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = spec;
  bad.objects.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = spec;
  bad.max_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = spec;
  bad.episode_len = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("success predicate respects both tolerances and wrapping") {
  const TaskSpec spec = make_default_task();
  PlanarPose target = spec.target;

  CHECK(pose_success(target, target, spec));

  PlanarPose p = target;
  p.x += 0.019;
  CHECK(pose_success(p, target, spec));
  p.x = target.x + 0.021;
  CHECK_FALSE(pose_success(p, target, spec));

  p = target;
  p.theta += 14.0 * kPi / 180.0;
  CHECK(pose_success(p, target, spec));
  p.theta = target.theta + 16.0 * kPi / 180.0;
  CHECK_FALSE(pose_success(p, target, spec));

  // A heading error of a full turn minus 14 degrees is a 14 degree error.
  p.theta = target.theta + 2.0 * kPi - 14.0 * kPi / 180.0;
  CHECK(pose_success(p, target, spec));

  // A half turn is a failure: success is about true heading, not the axis.
  p = target;
  p.theta = target.theta + kPi;
  CHECK_FALSE(pose_success(p, target, spec));
}

TEST_CASE("success predicate is invariant to rotating the whole scene") {
  const TaskSpec spec = make_default_task();
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    PlanarPose pose{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
                    rng.uniform(-kPi, kPi)};
    PlanarPose target{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
                      rng.uniform(-kPi, kPi)};
    const double phi = rng.uniform(-kPi, kPi);
    const bool before = pose_success(pose, target, spec);
    const bool after = pose_success(rotated_about_origin(pose, phi),
                                    rotated_about_origin(target, phi), spec);
    CHECK(before == after);
  }
}

TEST_CASE("action normalization round-trips and maps caps to the unit box") {
  const TaskSpec spec = make_default_task();
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Eigen::RowVector4d raw(rng.uniform(-spec.max_step, spec.max_step),
                           rng.uniform(-spec.max_step, spec.max_step),
                           rng.uniform(-spec.max_turn, spec.max_turn),
                           rng.uniform(0.0, 1.0));
    const Eigen::RowVector4d norm = normalize_action(raw, spec);
    CHECK(norm.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    const Eigen::RowVector4d back = denormalize_action(norm, spec);
    CHECK((back - raw).cwiseAbs().maxCoeff() < 1e-14);
  }
  const Eigen::RowVector4d caps(spec.max_step, -spec.max_step, spec.max_turn,
                                1.0);
  const Eigen::RowVector4d n = normalize_action(caps, spec);
  CHECK(n(0) == doctest::Approx(1.0));
  CHECK(n(1) == doctest::Approx(-1.0));
  CHECK(n(2) == doctest::Approx(1.0));
  CHECK(n(3) == doctest::Approx(1.0));
  CHECK(normalize_action({0.0, 0.0, 0.0, 0.0}, spec)(3) ==
        doctest::Approx(-1.0));
  CHECK(normalize_action({0.0, 0.0, 0.0, 0.5}, spec)(3) ==
        doctest::Approx(0.0));
}

// ---------------------------------------------------------------------------
// Renderer and lifting

TEST_CASE("label renderer paints regions by back-projection") {
  const ToyObject obj = make_arrow_object();
  const ObservationConfig cfg;
  const semlift::Image img = render_labels(obj, PlanarPose{}, cfg);
  CHECK(img.height == cfg.image_size);
  CHECK(img.width == cfg.image_size);
  REQUIRE(img.rgb.rows() == cfg.image_size * cfg.image_size);

  auto label_at_pixel = [&](int v, int u) {
    return semlift::decode_label(img.rgb.row(v * img.width + u).transpose());
  };

  // Pixel (u, v) sees the world point ((u - cx) / f, -(v - cy) / f).
  CHECK(label_at_pixel(31, 31) == 1);   // near the center: body
  CHECK(label_at_pixel(31, 39) == 2);   // world x ~ 0.075: nose
  CHECK(label_at_pixel(31, 24) == 3);   // world x ~ -0.075: tail
  CHECK(label_at_pixel(0, 0) == 0);     // far corner: background

  // A half turn swaps what the head pixel sees onto the tail region.
  const semlift::Image turned =
      render_labels(obj, PlanarPose{0.0, 0.0, kPi}, cfg);
  CHECK(semlift::decode_label(turned.rgb.row(31 * img.width + 39).transpose()) ==
        3);

  // Two objects render into one image; the second sits where it is posed.
  const ToyObject other = make_distractor_object();
  const semlift::Image pair = render_labels(
      {obj, other}, {PlanarPose{}, PlanarPose{0.0, 0.19, 0.0}}, cfg);
  CHECK(semlift::decode_label(pair.rgb.row(31 * img.width + 31).transpose()) ==
        1);
  // v = 12.5 - 0.5 sees world y = 0.19: the distractor's body.
  CHECK(semlift::decode_label(pair.rgb.row(12 * img.width + 31).transpose()) ==
        1);
  CHECK(semlift::decode_label(img.rgb.row(12 * img.width + 31).transpose()) ==
        0);

  // Pure function of its inputs.
  const semlift::Image again = render_labels(obj, PlanarPose{}, cfg);
  CHECK(again.rgb == img.rgb);
}

TEST_CASE("lifted features reproduce the oracle labels away from edges") {
  const ToyObject obj = make_arrow_object();
  const ObservationConfig cfg;
  const semlift::Image img = render_labels(obj, PlanarPose{}, cfg);
  const auto fmap = semlift::LabelOracleExtractor().extract(img);

  const auto grid = obj.surface_grid(cfg.grid_pitch);
  geometry::PointCloud cloud;
  cloud.points = Eigen::MatrixXd::Zero(grid.rows(), 3);
  cloud.points.leftCols(2) = grid;
  const auto field = semlift::lift(cloud, cfg.camera(), fmap);

  int robust = 0;
  for (int i = 0; i < grid.rows(); ++i) {
    const Eigen::Vector2d p = grid.row(i);
    // One-hot block is a convex combination of one-hots: sums to one.
    CHECK(field.features.row(i).head(semlift::kNumLabels).sum() ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Coordinate channels reproduce the projection exactly (bilinear
    // sampling of a linear ramp).
    const double u = 31.5 + cfg.focal * p.x();
    const double v = 31.5 - cfg.focal * p.y();
    CHECK(field.features(i, 4) ==
          doctest::Approx(u / (cfg.image_size - 1)).epsilon(1e-9));
    CHECK(field.features(i, 5) ==
          doctest::Approx(v / (cfg.image_size - 1)).epsilon(1e-9));
    if (label_margin(obj, p) < 0.015) continue;
    ++robust;
    const int label = obj.label_at(p);
    for (int k = 0; k < semlift::kNumLabels; ++k) {
      CHECK(field.features(i, k) ==
            doctest::Approx(k == label ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
  // The margin test must actually bite on a decent share of the surface.
  CHECK(robust > 20);
}

// ---------------------------------------------------------------------------
// Environment

TEST_CASE("environment validates its inputs") {
  const ObservationConfig ocfg;
  TaskSpec bad = make_default_task();
  bad.delta_pos = -1.0;
  CHECK_THROWS_AS(ToyEnv(bad, ocfg), ConfigError);

  ObservationConfig bad_obs;
  bad_obs.parts = 0;
  CHECK_THROWS_AS(ToyEnv(make_default_task(), bad_obs), ConfigError);

  ToyEnv env(make_default_task(), ocfg);
  CHECK_THROWS_AS(env.observe(), std::logic_error);
  CHECK_THROWS_AS(env.step({0.0, 0.0, 0.0, 1.0}), std::logic_error);
}

TEST_CASE("same seed resets to a bit-identical state") {
  const TaskSpec spec = make_default_task();
  const ObservationConfig ocfg;
  ToyEnv a(spec, ocfg);
  ToyEnv b(spec, ocfg);
  a.reset(42);
  b.reset(42);
  CHECK(a.pose().x == b.pose().x);
  CHECK(a.pose().y == b.pose().y);
  CHECK(a.pose().theta == b.pose().theta);
  CHECK(a.initial_field().points == b.initial_field().points);
  CHECK(a.initial_field().features == b.initial_field().features);
  CHECK(a.initial_image().rgb == b.initial_image().rgb);
  const Observation oa = a.observe();
  const Observation ob = b.observe();
  CHECK(oa.part_indices == ob.part_indices);
  CHECK(oa.robot == ob.robot);

  b.reset(43);
  CHECK(a.pose().theta != b.pose().theta);
}

TEST_CASE("zero ranges reset to the canonical pose") {
  TaskSpec spec = make_default_task();
  spec.ranges = PoseRanges{0.0, 0.0, 0.0};
  ToyEnv env(spec, ObservationConfig{});
  env.reset(7);
  CHECK(env.pose().x == 0.0);
  CHECK(env.pose().y == 0.0);
  CHECK(env.pose().theta == 0.0);
}

TEST_CASE("static objects land on the ring, clear of the tracked object") {
  const TaskSpec spec = make_default_task();
  REQUIRE(spec.objects.size() == 2);
  ToyEnv env(spec, ObservationConfig{});
  for (int i = 0; i < 100; ++i) {
    env.reset(derive_seed(77, i));
    REQUIRE(env.distractor_poses().size() == 1);
    const PlanarPose d = env.distractor_poses()[0];
    const double radius = std::hypot(d.x, d.y);
    CHECK(radius >= 0.17);
    CHECK(radius <= 0.20);

    // Both objects contribute sampled rows, and the clearance rule keeps
    // any cross-object point pair at least the boundary gap apart.
    const auto& field = env.initial_field();
    const auto& owner = env.point_object();
    REQUIRE(owner.size() == static_cast<std::size_t>(field.points.rows()));
    int tracked = 0, statics = 0;
    double min_gap = 1e9;
    for (Eigen::Index a = 0; a < field.points.rows(); ++a) {
      if (owner[static_cast<std::size_t>(a)] == 0) {
        ++tracked;
        continue;
      }
      ++statics;
      for (Eigen::Index b = 0; b < field.points.rows(); ++b) {
        if (owner[static_cast<std::size_t>(b)] != 0) continue;
        min_gap = std::min(
            min_gap, (field.points.row(a) - field.points.row(b)).norm());
      }
    }
    CHECK(tracked > 0);
    CHECK(statics > 0);
    CHECK(min_gap >= 0.02);
  }
}

TEST_CASE("initial poses are uniform over the configured ranges") {
  const TaskSpec spec = make_default_task();
  ToyEnv env(spec, ObservationConfig{});
  const int n = 1000;
  std::vector<double> xs, ys, ts;
  xs.reserve(n);
  ys.reserve(n);
  ts.reserve(n);
  for (int i = 0; i < n; ++i) {
    env.reset(derive_seed(1234, i));
    CHECK(std::abs(env.pose().x) <= spec.ranges.x);
    CHECK(std::abs(env.pose().y) <= spec.ranges.y);
    CHECK(std::abs(env.pose().theta) <= spec.ranges.theta + 1e-12);
    xs.push_back((env.pose().x + spec.ranges.x) / (2.0 * spec.ranges.x));
    ys.push_back((env.pose().y + spec.ranges.y) / (2.0 * spec.ranges.y));
    ts.push_back((env.pose().theta + spec.ranges.theta) /
                 (2.0 * spec.ranges.theta));
  }
  CHECK(test::ks_pvalue_uniform(xs) > 0.01);
  CHECK(test::ks_pvalue_uniform(ys) > 0.01);
  CHECK(test::ks_pvalue_uniform(ts) > 0.01);
}

TEST_CASE("steps clamp to the actuation caps and wrap the heading") {
  TaskSpec spec = make_default_task();
  spec.ranges = PoseRanges{0.0, 0.0, 0.0};
  ToyEnv env(spec, ObservationConfig{});
  env.reset(0);
  env.step({1.0, -1.0, 10.0, 0.5});
  CHECK(env.pose().x == doctest::Approx(spec.max_step));
  CHECK(env.pose().y == doctest::Approx(-spec.max_step));
  CHECK(env.pose().theta == doctest::Approx(spec.max_turn));
  CHECK(env.t() == 1);
  CHECK_FALSE(env.done());
  for (int i = 0; i < 15; ++i) env.step({0.0, 0.0, 10.0, 0.5});
  CHECK(std::abs(env.pose().theta) <= kPi + 1e-12);
  CHECK(env.done());
}

TEST_CASE("observations propagate the initial field rigidly") {
  const TaskSpec spec = make_default_task();
  ToyEnv env(spec, ObservationConfig{});
  env.reset(99);
  const Observation first = env.observe();
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    env.step({rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
              rng.uniform(-0.4, 0.4), 1.0});
  }
  const Observation obs = env.observe();
  CHECK(obs.t == 5);
  CHECK(obs.field.timestep == 5);

  // Features ride along bit-identically. Tracked rows follow the relative
  // rigid motion of the object since reset; static rows do not move at all.
  CHECK(obs.field.features == env.initial_field().features);
  const auto rel = geometry::compose(
      obs.pose_true.transform(), first.pose_true.transform().inverse());
  int moved = 0, still = 0;
  for (int i = 0; i < obs.field.size(); ++i) {
    if (env.point_object()[static_cast<std::size_t>(i)] == 0) {
      ++moved;
      const Eigen::Vector3d expect =
          rel.apply(env.initial_field().points.row(i).transpose());
      CHECK((obs.field.points.row(i).transpose() - expect).norm() < 1e-12);
    } else {
      ++still;
      CHECK(obs.field.points.row(i) == env.initial_field().points.row(i));
    }
  }
  CHECK(moved > 0);
  CHECK(still > 0);

  // Robot channels: gripper xy, grip, phase.
  REQUIRE(obs.robot.size() == kRobotDim);
  CHECK(obs.robot(0) == env.pose().x);
  CHECK(obs.robot(1) == env.pose().y);
  CHECK(obs.robot(2) == 1.0);
  CHECK(obs.robot(3) == doctest::Approx(5.0 / spec.episode_len));

  // Partition indices cover every point exactly once.
  std::vector<int> all;
  for (const auto& part : obs.part_indices) {
    CHECK_FALSE(part.empty());
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<int> iota(obs.field.size());
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(all == iota);
  CHECK(obs.part_indices.size() == 8);
}

TEST_CASE("observed pose never reveals the heading sign") {
  const TaskSpec spec = make_default_task();
  ToyEnv env(spec, ObservationConfig{});
  env.reset(17);
  const Observation obs = env.observe();
  const double theta = obs.pose_true.theta;
  const auto expected =
      geometry::RigidTransform::rotation_z(wrap_axis(theta),
                                           {obs.pose_true.x, obs.pose_true.y,
                                            0.0});
  CHECK((obs.pose_obs.rotation() - expected.rotation()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((obs.pose_obs.translation() - expected.translation())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  // Folding: theta and theta + pi produce the same observed rotation.
  const auto folded = geometry::RigidTransform::rotation_z(
      wrap_axis(theta + kPi), {obs.pose_true.x, obs.pose_true.y, 0.0});
  CHECK((obs.pose_obs.rotation() - folded.rotation()).cwiseAbs().maxCoeff() <
        1e-9);

  // Lifted labels land where the true pose says they should: a sampled
  // point over the head region carries head features. Only the tracked
  // object's rows live in its body frame.
  bool saw_head = false;
  bool saw_tail = false;
  const auto world_to_body = obs.pose_true.transform().inverse();
  for (int i = 0; i < obs.field.size(); ++i) {
    if (env.point_object()[static_cast<std::size_t>(i)] != 0) continue;
    const Eigen::Vector3d body =
        world_to_body.apply(obs.field.points.row(i).transpose());
    if (label_margin(spec.objects[0], body.head<2>()) < 0.015) continue;
    const int label = spec.objects[0].label_at(body.head<2>());
    int argmax = 0;
    obs.field.features.row(i).head(semlift::kNumLabels).maxCoeff(&argmax);
    CHECK(argmax == label);
    saw_head = saw_head || label == 2;
    saw_tail = saw_tail || label == 3;
  }
  CHECK(saw_head);
  CHECK(saw_tail);
}

// ---------------------------------------------------------------------------
// Scripted expert

TEST_CASE("expert at the target commands no motion and succeeds") {
  const TaskSpec spec = make_default_task();
  const ExpertPlan plan = plan_expert(spec.target, spec);
  CHECK(plan.feasible);
  REQUIRE(plan.actions.rows() == spec.episode_len);
  CHECK(plan.actions.leftCols(3).cwiseAbs().maxCoeff() == 0.0);
  CHECK((plan.actions.col(3).array() == 1.0).all());
}

TEST_CASE("expert from a half-turn start rotates through pi") {
  TaskSpec spec = make_default_task();
  PlanarPose start = spec.target;
  start.theta = wrap_angle(spec.target.theta + kPi);
  const ExpertPlan plan = plan_expert(start, spec);
  CHECK(plan.feasible);
  const double total = plan.actions.col(2).cwiseAbs().sum();
  CHECK(total == doctest::Approx(kPi).epsilon(0.1));
  CHECK(plan.actions.col(2).cwiseAbs().maxCoeff() <= spec.max_turn + 1e-12);
}

TEST_CASE("expert solves nearly all randomized episodes open loop") {
  const TaskSpec spec = make_default_task();
  ToyEnv env(spec, ObservationConfig{});
  const int n = 500;
  int solved = 0;
  for (int i = 0; i < n; ++i) {
    env.reset(derive_seed(777, i));
    const ExpertPlan plan = plan_expert(env.pose(), spec);
    if (!plan.feasible) continue;
    for (int t = 0; t < plan.actions.rows(); ++t) {
      env.step(plan.actions.row(t));
    }
    if (env.success()) ++solved;
  }
  // The feasible flag comes from the same kinematics the env integrates,
  // so a feasible plan must replay to success.
  CHECK(solved >= static_cast<int>(0.99 * n));
}

TEST_CASE("expert reports infeasibility instead of pretending") {
  const TaskSpec spec = make_default_task();
  const ExpertPlan plan = plan_expert(PlanarPose{5.0, 0.0, 0.0}, spec);
  CHECK_FALSE(plan.feasible);
  CHECK(plan.actions.rows() == spec.episode_len);

  // Mid-episode planning leaves fewer steps.
  CHECK(plan_expert(spec.target, spec, 10).actions.rows() ==
        spec.episode_len - 10);
  CHECK(plan_expert(spec.target, spec, spec.episode_len).feasible);
  CHECK_FALSE(
      plan_expert(PlanarPose{1.0, 0.0, 0.0}, spec, spec.episode_len).feasible);
  CHECK_THROWS_AS(plan_expert(spec.target, spec, -1), std::invalid_argument);
  CHECK_THROWS_AS(plan_expert(spec.target, spec, spec.episode_len + 1),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Dataset

TEST_CASE("dataset generation is reproducible byte for byte") {
  const TaskSpec spec = make_default_task();
  const ObservationConfig ocfg;
  const fs::path a = fresh_dir("data_a");
  const fs::path b = fresh_dir("data_b");
  const DatasetSummary sa = generate_dataset(spec, ocfg, 2, 123, a, "h123");
  const DatasetSummary sb = generate_dataset(spec, ocfg, 2, 123, b, "h123");
  CHECK(sa.episodes == 2);
  CHECK(sa.seed == 123);
  CHECK(sa.config_hash == "h123");
  REQUIRE(sa.episode_dirs.size() == 2);
  const auto ta = tree_bytes(a);
  CHECK_FALSE(ta.empty());
  CHECK(ta == tree_bytes(b));

  const DatasetSummary manifest = read_dataset_manifest(a);
  CHECK(manifest.episodes == 2);
  CHECK(manifest.seed == 123);
  CHECK(manifest.config_hash == "h123");
  CHECK(manifest.episode_dirs == sa.episode_dirs);
}

TEST_CASE("a single-episode dataset is one directory plus a manifest") {
  const fs::path dir = fresh_dir("data_one");
  generate_dataset(make_default_task(), ObservationConfig{}, 1, 9, dir, "h");
  int dirs = 0;
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) ++dirs;
    if (e.is_regular_file()) ++files;
  }
  CHECK(dirs == 1);
  CHECK(files == 1);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "ep_0000" / "manifest.json"));
  CHECK(fs::exists(dir / "ep_0000" / "partition.json"));
  CHECK(fs::exists(dir / "ep_0000" / "trajectory.json"));
  CHECK(fs::exists(dir / "ep_0000" / "fields" / "field_t0000.txt"));
}

TEST_CASE("episodes round-trip through disk exactly") {
  const fs::path dir = fresh_dir("data_rt");
  generate_dataset(make_default_task(), ObservationConfig{}, 2, 321, dir,
                   "h321");
  const auto episodes = load_dataset(dir);
  REQUIRE(episodes.size() == 2);
  for (const auto& ep : episodes) {
    CHECK_NOTHROW(ep.validate());
    CHECK(ep.success);
    CHECK(ep.length() == 16);
    CHECK(ep.actions.rows() == 16);
    CHECK(ep.robot.cols() == kRobotDim);
    CHECK(ep.poses.cols() == 3);

    const fs::path copy = fresh_dir("data_copy");
    write_episode(copy, ep, "h321");
    const EpisodeRecord back = read_episode(copy);
    CHECK(back.seed == ep.seed);
    CHECK(back.success == ep.success);
    CHECK(back.actions == ep.actions);
    CHECK(back.robot == ep.robot);
    CHECK(back.poses == ep.poses);
    CHECK(back.part_indices == ep.part_indices);
    REQUIRE(back.fields.size() == ep.fields.size());
    for (std::size_t t = 0; t < ep.fields.size(); ++t) {
      CHECK(back.fields[t].points == ep.fields[t].points);
      CHECK(back.fields[t].features == ep.fields[t].features);
    }
  }

  EpisodeRecord broken = episodes[0];
  broken.actions = broken.actions.topRows(10).eval();
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("every stored demonstration replays to success") {
  const TaskSpec spec = make_default_task();
  const ObservationConfig ocfg;
  const fs::path dir = fresh_dir("data_replay");
  generate_dataset(spec, ocfg, 3, 55, dir, "h");
  ToyEnv env(spec, ocfg);
  for (const auto& ep : load_dataset(dir)) {
    env.reset(ep.seed);
    CHECK(env.pose().x == ep.poses(0, 0));
    CHECK(env.pose().y == ep.poses(0, 1));
    CHECK(env.pose().theta == ep.poses(0, 2));
    for (int t = 0; t < ep.length(); ++t) {
      env.step(ep.actions.row(t));
    }
    CHECK(env.success());
  }
}

TEST_CASE("training items honor the toggles and pad the horizon") {
  const TaskSpec spec = make_default_task();
  const fs::path dir = fresh_dir("data_items");
  generate_dataset(spec, ObservationConfig{}, 1, 77, dir, "h");
  const EpisodeRecord ep = load_dataset(dir)[0];

  const auto items = episode_items(ep, spec, Toggles{}, 8);
  REQUIRE(items.size() == 16);
  for (const auto& item : items) {
    CHECK(item.points.rows() == 64);
    CHECK(item.feat_a.cols() == 6);
    CHECK(item.feat_b.cols() == 6);
    CHECK(item.actions.rows() == 8);
    CHECK(item.actions.cols() == 4);
    CHECK(item.actions.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    CHECK(item.part_indices.size() == 8);
  }
  // Unpadded chunk rows are the normalized stored actions.
  const auto& mid = items[10];
  for (int h = 0; h < 6; ++h) {
    const Eigen::RowVector4d expect =
        normalize_action(ep.actions.row(10 + h), spec);
    CHECK((mid.actions.row(h) - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
  // Past the end of the episode, the last action repeats.
  CHECK(mid.actions.row(6) == mid.actions.row(5));
  CHECK(mid.actions.row(7) == mid.actions.row(5));
  // Feature blocks are the two halves of the stored field.
  CHECK(items[0].feat_a == ep.fields[0].features.leftCols(6));
  CHECK(items[0].feat_b == ep.fields[0].features.rightCols(6));

  Toggles off;
  off.dense_semantic = false;
  off.global_pose_condition = false;
  off.part_refine = false;
  const auto bare = episode_items(ep, spec, off, 8);
  CHECK(bare[3].feat_a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(bare[3].feat_b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(bare[3].pose.rotation() == Eigen::Matrix3d::Identity());
  CHECK(bare[3].pose.translation() == Eigen::Vector3d::Zero());
  REQUIRE(bare[3].part_indices.size() == 1);
  CHECK(bare[3].part_indices[0].size() == 64);
  // Geometry is untouched by the toggles.
  CHECK(bare[3].points == items[3].points);

  const auto posed = episode_items(ep, spec, Toggles{}, 8);
  const double theta = ep.poses(3, 2);
  const auto expect = geometry::RigidTransform::rotation_z(
      wrap_axis(theta), {ep.poses(3, 0), ep.poses(3, 1), 0.0});
  CHECK((posed[3].pose.rotation() - expect.rotation()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(
      (posed[3].pose.translation() - expect.translation()).cwiseAbs().maxCoeff() <
      1e-12);
}

// ---------------------------------------------------------------------------
// Evaluation

TEST_CASE("expert policy evaluates to a perfect score") {
  const TaskSpec spec = make_default_task();
  const ObservationConfig ocfg;
  const EvalReport report =
      evaluate(expert_policy(spec), spec, ocfg, 10, {11, 22}, 4, "hash");
  CHECK_NOTHROW(report.validate());
  REQUIRE(report.success_rates.size() == 2);
  CHECK(report.success_rates[0] >= 0.99);
  CHECK(report.success_rates[1] >= 0.99);
  CHECK(report.mean >= 0.99);
  CHECK(report.std_dev == doctest::Approx(0.0));
  CHECK(report.episodes_per_seed == 10);

  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j.size() == 7);
  CHECK(j.at("task") == spec.name);
  CHECK(j.at("seeds").size() == 2);
  CHECK(j.at("success_rates").size() == 2);
  CHECK(j.at("mean").get<double>() >= 0.99);
  CHECK(j.at("std").is_number());
  CHECK(j.at("episodes_per_seed") == 10);
  CHECK(j.at("config_hash") == "hash");

  // Deterministic end to end.
  const EvalReport again =
      evaluate(expert_policy(spec), spec, ocfg, 10, {11, 22}, 4, "hash");
  CHECK(again.to_json() == report.to_json());
}

TEST_CASE("random policy almost never scores under tight tolerances") {
  const TaskSpec spec = make_default_task();
  const EvalReport report = evaluate(random_policy(spec, 8), spec,
                                     ObservationConfig{}, 40, {5}, 4, "h");
  CHECK(report.mean <= 0.05);
}

TEST_CASE("evaluation rejects malformed inputs and reports") {
  const TaskSpec spec = make_default_task();
  const ObservationConfig ocfg;
  CHECK_THROWS_AS(evaluate(expert_policy(spec), spec, ocfg, 0, {1}, 4, "h"),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate(expert_policy(spec), spec, ocfg, 1, {}, 4, "h"),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate(expert_policy(spec), spec, ocfg, 1, {1}, 0, "h"),
                  std::invalid_argument);

  PolicyFn bad = [](const Observation&, std::uint64_t) {
    return Eigen::MatrixXd::Zero(0, 4).eval();
  };
  CHECK_THROWS_AS(evaluate(bad, spec, ocfg, 1, {1}, 4, "h"),
                  std::invalid_argument);

  EvalReport r;
  r.task = "t";
  r.seeds = {1};
  r.success_rates = {1.2};
  r.episodes_per_seed = 1;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r.success_rates = {0.5, 0.5};
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r.success_rates = {0.5};
  r.episodes_per_seed = 0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("an untrained model runs closed loop deterministically") {
  const BenchConfig cfg = tiny_config();
  Rng rng(derive_seed(cfg.train.seed, 0));
  policy::PolicyModel model(cfg.policy, rng);

  const auto policy = model_policy(&model, cfg.task, cfg.toggles, true);
  const EvalReport a = evaluate(policy, cfg.task, cfg.observation, 2, {3}, 4,
                                cfg.config_hash());
  CHECK(a.mean >= 0.0);
  CHECK(a.mean <= 1.0);
  const EvalReport b = evaluate(policy, cfg.task, cfg.observation, 2, {3}, 4,
                                cfg.config_hash());
  CHECK(a.to_json() == b.to_json());

  // Every toggle combination must be runnable with the same model.
  for (const auto& [name, toggles] : acceptance_grid()) {
    (void)name;
    const auto fn = model_policy(&model, cfg.task, toggles, true);
    const EvalReport r =
        evaluate(fn, cfg.task, cfg.observation, 1, {4}, 4, "h");
    CHECK(r.success_rates.size() == 1);
  }
}

// ---------------------------------------------------------------------------
// Training and ablation

TEST_CASE("training runs, logs metrics, and reduces the loss") {
  BenchConfig cfg = tiny_config();
  cfg.train.steps = 60;
  cfg.train.batch = 8;
  cfg.train.lr = 3e-3;
  cfg.train.log_every = 10;
  const fs::path dir = fresh_dir("train_smoke");
  generate_dataset(cfg.task, cfg.observation, 2, 13, dir, cfg.data_hash());
  const auto episodes = load_dataset(dir);

  std::ostringstream metrics;
  const auto model = train_policy(episodes, cfg, cfg.toggles, &metrics);
  REQUIRE(model != nullptr);

  std::vector<double> losses;
  std::istringstream lines(metrics.str());
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("step"));
    CHECK(j.contains("lr"));
    CHECK(j.contains("alpha"));
    CHECK(j.contains("beta"));
    losses.push_back(j.at("loss").get<double>());
    CHECK(std::isfinite(losses.back()));
  }
  REQUIRE(losses.size() >= 4);
  CHECK(losses.back() < losses.front());

  // Same seeds, same data: training is reproducible.
  std::ostringstream metrics2;
  train_policy(episodes, cfg, cfg.toggles, &metrics2);
  CHECK(metrics2.str() == metrics.str());
}

TEST_CASE("ablation grids cover the standard rows") {
  const auto table = table_grid();
  REQUIRE(table.size() == 5);
  CHECK(table[0].first == "none");
  CHECK(table[4].first == "full");
  CHECK_FALSE(table[0].second.dense_semantic);
  CHECK_FALSE(table[0].second.global_pose_condition);
  CHECK_FALSE(table[0].second.part_refine);
  CHECK(table[4].second.dense_semantic);
  CHECK(table[4].second.global_pose_condition);
  CHECK(table[4].second.part_refine);

  const auto acc = acceptance_grid();
  REQUIRE(acc.size() == 6);
  bool has_global_only = false;
  for (const auto& [name, t] : acc) {
    if (name == "global_only") {
      has_global_only = true;
      CHECK(t.dense_semantic);
      CHECK(t.global_pose_condition);
      CHECK_FALSE(t.part_refine);
    }
  }
  CHECK(has_global_only);
}

TEST_CASE("a micro ablation writes reports and checkpoints per row") {
  BenchConfig cfg = tiny_config();
  cfg.train.steps = 15;
  cfg.eval.episodes_per_seed = 1;
  const fs::path data = fresh_dir("abl_data");
  generate_dataset(cfg.task, cfg.observation, 1, 3, data, cfg.data_hash());
  const auto episodes = load_dataset(data);

  const fs::path out = fresh_dir("abl_out");
  std::ostringstream progress;
  const std::vector<std::pair<std::string, Toggles>> grid = {
      table_grid()[0], table_grid()[4]};
  const auto rows = run_ablation(cfg, grid, episodes, out, &progress);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].name == "none");
  CHECK(rows[1].name == "full");
  for (const auto& row : rows) {
    CHECK(row.report.mean >= 0.0);
    CHECK(row.report.mean <= 1.0);
    CHECK(fs::exists(out / (row.name + ".ckpt")));
    CHECK(fs::exists(out / (row.name + "_metrics.jsonl")));
  }
  CHECK(fs::exists(out / "ablation.json"));
  CHECK(fs::exists(out / "ablation.txt"));

  const auto j = nlohmann::json::parse(slurp(out / "ablation.json"));
  REQUIRE(j.at("rows").size() == 2);
  CHECK(j.at("rows")[0].at("name") == "none");
  CHECK(j.at("rows")[0].contains("toggles"));
  CHECK(j.at("rows")[0].contains("report"));
  const std::string text = slurp(out / "ablation.txt");
  CHECK(text.find("none") != std::string::npos);
  CHECK(text.find("full") != std::string::npos);
  CHECK(progress.str().find("full") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Visualization

TEST_CASE("field colors separate the two labeled ends") {
  TaskSpec spec = make_default_task();
  spec.ranges = PoseRanges{0.0, 0.0, 0.0};
  ToyEnv env(spec, ObservationConfig{});
  env.reset(0);
  const auto& field = env.initial_field();

  const Eigen::MatrixXd colors = field_colors(field);
  REQUIRE(colors.rows() == field.size());
  REQUIRE(colors.cols() == 3);
  CHECK(colors.minCoeff() >= 0.0);
  CHECK(colors.maxCoeff() <= 1.0);

  Eigen::RowVector3d head = Eigen::RowVector3d::Zero();
  Eigen::RowVector3d tail = Eigen::RowVector3d::Zero();
  int n_head = 0;
  int n_tail = 0;
  for (int i = 0; i < field.size(); ++i) {
    if (env.point_object()[static_cast<std::size_t>(i)] != 0) continue;
    const Eigen::Vector2d p = field.points.row(i).head<2>();
    const int label = spec.objects[0].label_at(p);
    if (label == 2) {
      head += colors.row(i);
      ++n_head;
    } else if (label == 3) {
      tail += colors.row(i);
      ++n_tail;
    }
  }
  REQUIRE(n_head > 0);
  REQUIRE(n_tail > 0);
  CHECK((head / n_head - tail / n_tail).norm() > 0.2);
}

TEST_CASE("constant features render as a single color") {
  semlift::SemanticField field;
  Rng rng(8);
  field.points = rng.normal_matrix(30, 3);
  field.features = Eigen::MatrixXd::Constant(30, 12, 0.75);
  const Eigen::MatrixXd colors = field_colors(field);
  CHECK((colors.array() == 0.5).all());
}

TEST_CASE("visualize_field writes deterministic artifacts") {
  TaskSpec spec = make_default_task();
  spec.ranges = PoseRanges{0.0, 0.0, 0.0};
  ToyEnv env(spec, ObservationConfig{});
  env.reset(0);

  const fs::path dir = fresh_dir("viz");
  const std::string field_path = (dir / "field.txt").string();
  semlift::write_field(field_path, env.initial_field());

  visualize_field(field_path, dir / "a");
  REQUIRE(fs::exists(dir / "a.txt"));
  REQUIRE(fs::exists(dir / "a.ppm"));

  // Point file: one "x y z r g b" line per point, colors in [0, 1].
  std::ifstream txt(dir / "a.txt");
  int lines = 0;
  double x, y, z, r, g, b;
  while (txt >> x >> y >> z >> r >> g >> b) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    ++lines;
  }
  CHECK(lines == env.initial_field().size());

  const std::string ppm = slurp(dir / "a.ppm");
  CHECK(ppm.substr(0, 2) == "P6");

  visualize_field(field_path, dir / "b");
  CHECK(slurp(dir / "b.txt") == slurp(dir / "a.txt"));
  CHECK(slurp(dir / "b.ppm") == slurp(dir / "a.ppm"));

  CHECK_THROWS_AS(visualize_field((dir / "missing.txt").string(), dir / "c"),
                  PersistenceError);
}

// ---------------------------------------------------------------------------
// Configuration

TEST_CASE("default config validates and hashes stably") {
  const BenchConfig cfg = default_bench_config();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.config_hash().size() == 16);
  CHECK(cfg.config_hash() == default_bench_config().config_hash());
  CHECK(parse_bench_config("{}").config_hash() == cfg.config_hash());

  // Training knobs move the full hash but not the data pairing hash.
  BenchConfig tweaked = cfg;
  tweaked.train.steps += 1;
  CHECK(tweaked.config_hash() != cfg.config_hash());
  CHECK(tweaked.data_hash() == cfg.data_hash());

  BenchConfig resampled = cfg;
  resampled.observation.n_points += 1;
  CHECK(resampled.config_hash() != cfg.config_hash());
  CHECK(resampled.data_hash() != cfg.data_hash());

  BenchConfig moved = cfg;
  moved.task.delta_pos *= 2.0;
  CHECK(moved.data_hash() != cfg.data_hash());
}

TEST_CASE("config parsing applies overrides and converts angles") {
  const auto cfg = parse_bench_config(R"({
    "task": {"delta_ang_deg": 30, "max_turn_deg": 45,
             "target": {"x": 0.01, "theta_deg": 90}},
    "observation": {"n_points": 48},
    "policy": {"stage_mults": [1, 2], "channels": 16},
    "train": {"steps": 12},
    "eval": {"seeds": [4, 5], "replan_every": 2}
  })");
  CHECK(cfg.task.delta_ang == doctest::Approx(kPi / 6.0));
  CHECK(cfg.task.max_turn == doctest::Approx(kPi / 4.0));
  CHECK(cfg.task.target.x == 0.01);
  CHECK(cfg.task.target.theta == doctest::Approx(kPi / 2.0));
  CHECK(cfg.observation.n_points == 48);
  CHECK(cfg.policy.stage_mults == std::vector<int>{1, 2});
  CHECK(cfg.policy.channels == 16);
  CHECK(cfg.train.steps == 12);
  CHECK(cfg.eval.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(cfg.eval.replan_every == 2);
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_bench_config(R"({"nope": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_bench_config(R"({"train": {"nope": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_bench_config(R"({"task": {"delta_pos": -1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_bench_config(R"({"task": {"object": "blob"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_bench_config(R"({"eval": {"replan_every": 20}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_bench_config("{ nope"), ConfigError);

  try {
    parse_bench_config(R"({"train": {"nope": 1}})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("train.nope") != std::string::npos);
  }
}

TEST_CASE("config loading distinguishes missing files from bad content") {
  const fs::path dir = fresh_dir("cfg");
  CHECK_THROWS_AS(load_bench_config(dir / "missing.json"), PersistenceError);
  std::ofstream(dir / "bad.json") << "{ nope";
  CHECK_THROWS_AS(load_bench_config(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "ok.json") << R"({"train": {"steps": 5}})";
  CHECK(load_bench_config(dir / "ok.json").train.steps == 5);
}

// ---------------------------------------------------------------------------
// Command line

TEST_CASE("cli end to end: demos, training, evaluation, visualization") {
  const fs::path dir = fresh_dir("cli");
  const fs::path cfg_path = dir / "cfg.json";
  std::ofstream(cfg_path) << tiny_config_json();
  const std::string data = (dir / "data").string();
  const std::string run = (dir / "run").string();
  fs::create_directories(run);

  std::string out;
  CHECK(cli({"semfield", "gen-demos", "--config", cfg_path.string(),
             "--seed", "9", "--episodes", "2", "--out", data},
            &out) == 0);
  CHECK(fs::exists(fs::path(data) / "manifest.json"));

  CHECK(cli({"semfield", "train", "--config", cfg_path.string(), "--data",
             data, "--out", run}) == 0);
  CHECK(fs::exists(fs::path(run) / "policy.ckpt"));
  CHECK(fs::exists(fs::path(run) / "metrics.jsonl"));

  const std::string report_path = (dir / "report.json").string();
  CHECK(cli({"semfield", "eval", "--config", cfg_path.string(), "--seed",
             "1", "--ckpt", (fs::path(run) / "policy.ckpt").string(),
             "--out", report_path}) == 0);
  const auto report = nlohmann::json::parse(slurp(report_path));
  CHECK(report.contains("mean"));
  CHECK(report.at("seeds") == nlohmann::json::array({1}));

  const std::string field =
      (fs::path(data) / "ep_0000" / "fields" / "field_t0000.txt").string();
  CHECK(cli({"semfield", "viz-field", "--field", field, "--out",
             (dir / "viz" / "f").string()}) == 0);
  CHECK(fs::exists(dir / "viz" / "f.ppm"));
}

TEST_CASE("cli maps failure classes to exit codes") {
  const fs::path dir = fresh_dir("cli_err");
  const fs::path cfg_path = dir / "cfg.json";
  std::ofstream(cfg_path) << tiny_config_json();

  std::string out;
  std::string err;
  CHECK(cli({"semfield", "--help"}, &out) == 0);
  CHECK(out.find("gen-demos") != std::string::npos);

  // Usage errors.
  CHECK(cli({"semfield"}, &out, &err) == 2);
  CHECK(cli({"semfield", "frobnicate"}, &out, &err) == 2);
  CHECK(cli({"semfield", "gen-demos", "--out"}, &out, &err) == 2);

  // Config errors.
  std::ofstream(dir / "bad.json") << "{ nope";
  CHECK(cli({"semfield", "gen-demos", "--config",
             (dir / "bad.json").string(), "--out", (dir / "d").string()},
            &out, &err) == 2);
  std::ofstream(dir / "unknown.json") << R"({"trian": {}})";
  CHECK(cli({"semfield", "gen-demos", "--config",
             (dir / "unknown.json").string(), "--out",
             (dir / "d").string()},
            &out, &err) == 2);

  // I/O errors.
  CHECK(cli({"semfield", "gen-demos", "--config",
             (dir / "missing.json").string(), "--out",
             (dir / "d").string()},
            &out, &err) == 3);
  CHECK(cli({"semfield", "eval", "--config", cfg_path.string(), "--ckpt",
             (dir / "missing.ckpt").string()},
            &out, &err) == 3);
  CHECK(cli({"semfield", "viz-field", "--field",
             (dir / "missing_field.txt").string(), "--out",
             (dir / "v").string()},
            &out, &err) == 3);
}

TEST_CASE("cli rejects stale datasets and mismatched checkpoints") {
  const fs::path dir = fresh_dir("cli_pair");
  const fs::path cfg_path = dir / "cfg.json";
  std::ofstream(cfg_path) << tiny_config_json();
  const std::string data = (dir / "data").string();
  const std::string run = (dir / "run").string();
  fs::create_directories(run);

  REQUIRE(cli({"semfield", "gen-demos", "--config", cfg_path.string(),
               "--seed", "9", "--episodes", "1", "--out", data}) == 0);
  REQUIRE(cli({"semfield", "train", "--config", cfg_path.string(), "--data",
               data, "--out", run}) == 0);

  // A config that resamples the observation no longer matches the dataset.
  const fs::path other_obs = dir / "other_obs.json";
  std::ofstream(other_obs) << R"({
    "observation": {"n_points": 32, "parts": 4, "grid_pitch": 0.01},
    "policy": {"channels": 8, "stage_mults": [1], "diffusion_steps": 5,
               "d_g": 8, "d_r": 4, "d_e": 6, "attention_dim": 4}
  })";
  std::string err;
  CHECK(cli({"semfield", "train", "--config", other_obs.string(), "--data",
             data, "--out", run},
            nullptr, &err) == 2);

  // A config with a different model shape cannot load the checkpoint.
  const fs::path other_model = dir / "other_model.json";
  std::ofstream(other_model) << R"({
    "observation": {"n_points": 24, "parts": 4, "grid_pitch": 0.01},
    "policy": {"channels": 8, "stage_mults": [1], "diffusion_steps": 5,
               "d_g": 10, "d_r": 4, "d_e": 6, "attention_dim": 4},
    "eval": {"episodes_per_seed": 1, "seeds": [1]}
  })";
  CHECK(cli({"semfield", "eval", "--config", other_model.string(), "--ckpt",
             (fs::path(run) / "policy.ckpt").string()},
            nullptr, &err) == 2);
}
