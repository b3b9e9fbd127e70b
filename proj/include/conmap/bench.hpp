// Copyright 2026 The conmap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef CONMAP_BENCH_HPP_
#define CONMAP_BENCH_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "conmap/connectivity.hpp"
#include "conmap/oracle.hpp"
#include "conmap/planner.hpp"

namespace conmap {

/// Two mirrored 4-link arms with bases on the x-axis, holding a rigid bar
/// between their tips.
struct DualArmDesign {
  std::vector<double> link_lengths{0.6, 0.5, 0.4, 0.25};
  /// Joint limits of the left arm; the right arm gets the mirror image.
  std::vector<JointLimit> joint_limits{{-1.5, 1.5}, {-1.5, 1.5},
                                       {-1.5, 1.5}, {-1.5, 1.5}};
  double half_base = 0.6;
  double bar_length = 0.5;
  /// Pin the bar orientation (removes one more degree of freedom).
  bool fixed_orientation = true;
  double bar_theta = 0.0;
};

SystemSpec dual_arm_system(const DualArmDesign& d);

struct SceneOptions {
  int n_obstacles = 3;
  double obstacle_r_min = 0.06;
  double obstacle_r_max = 0.15;
  /// Obstacle centres and object positions are drawn inside these boxes.
  Eigen::Vector4d obstacle_box{-1.6, 1.6, -0.2, 2.0};  // x0 x1 y0 y1
  Eigen::Vector4d object_box{-1.2, 1.2, -0.6, 1.8};
  int min_candidates = 2;
  int max_tries = 200;
  SystemIkOptions ik;
  double clearance = kDefaultClearance;
};

/// Start and goal candidate sets for one randomized scene. Every candidate
/// is on-manifold and collision-free in this scene.
struct Scene {
  int id = 0;
  std::uint64_t seed = 0;
  std::vector<Obstacle> obstacles;
  Pose2d start_pose;
  Pose2d goal_pose;
  std::vector<JointConfig> starts;
  std::vector<JointConfig> goals;
};

/// Scene k is built from a seed derived from (seed, k).
Scene make_scene(const SystemSpec& sys, int id, std::uint64_t seed,
                 const SceneOptions& opts);
std::vector<Scene> make_scenes(const SystemSpec& sys, int n_scenes,
                               std::uint64_t seed, const SceneOptions& opts);

struct BenchRow {
  int scene_id = 0;
  Strategy strategy = Strategy::kRandom;
  bool success = false;
  double planning_time_s = 0.0;
  int start_idx = 0;
  int goal_idx = 0;
  std::optional<bool> oracle_same_component;
  long long nodes_expanded = 0;
};

/// Planning outcomes keyed by (scene id, start index, goal index). The
/// planner seed depends only on the scene, so a pair chosen by several
/// strategies, or by several models, is planned once.
class PlanCache {
 public:
  std::optional<PlanResult> find(int scene, int s, int g) const;
  void store(int scene, int s, int g, const PlanResult& r);

 private:
  mutable std::mutex mu_;
  std::map<std::tuple<int, int, int>, PlanResult> results_;
};

struct BenchOptions {
  std::vector<Strategy> strategies{Strategy::kRandom, Strategy::kJointSpace,
                                   Strategy::kFeatureSpace};
  PlannerParams planner;
  FeatureSource feature_source = FeatureSource::kEncoder;
  /// Worker threads over scenes; 0 picks the hardware concurrency.
  int threads = 1;
  const OracleGraph* oracle = nullptr;
  PlanCache* cache = nullptr;
};

/// Every strategy on every scene. Rows are ordered by scene, then by the
/// order of opts.strategies.
std::vector<BenchRow> run_bench(const SystemSpec& sys,
                                const std::vector<Scene>& scenes,
                                const EncoderModel* model,
                                const BenchOptions& opts);

inline constexpr const char* kBenchCsvHeader =
    "scene_id,strategy,success,planning_time_s,start_idx,goal_idx,"
    "oracle_same_component";

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

/// Success rate over all trials; time mean and population standard
/// deviation over successful trials only.
struct StrategySummary {
  Strategy strategy = Strategy::kRandom;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent
  std::optional<double> mean_time_s;
  std::optional<double> std_time_s;
};

std::vector<StrategySummary> summarize(const std::vector<BenchRow>& rows);
std::string format_summary(const std::vector<StrategySummary>& s);

}  // namespace conmap

#endif  // CONMAP_BENCH_HPP_
