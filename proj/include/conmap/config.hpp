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
#ifndef CONMAP_CONFIG_HPP_
#define CONMAP_CONFIG_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "conmap/bench.hpp"
#include "conmap/dataset.hpp"
#include "conmap/encoder.hpp"
#include "conmap/pseudolabels.hpp"

namespace conmap {

/// Every tunable of the pipeline. Defaults are sized for a desktop run;
/// the file format is flat `key = value` lines grouped in [sections].
struct Config {
  DualArmDesign design;

  int dataset_poses = 300;
  std::uint64_t dataset_seed = 5;
  int dataset_max_solutions = 32;
  int dataset_restarts = 50;

  std::vector<int> label_neighbors{3, 10, 25, 50};
  std::vector<double> label_min_dist{0.1, 0.1, 0.2, 0.2};
  int label_epochs = 300;
  int label_min_cluster_size = 20;
  int label_min_samples = 10;
  std::uint64_t label_seed = 0;

  TrainConfig train = desk_train_config();

  int oracle_samples = 20000;
  double oracle_radius = 0.4;
  std::uint64_t oracle_seed = 1;

  int bench_scenes = 100;
  std::uint64_t bench_seed = 9;
  int bench_threads = 1;
  std::vector<Strategy> bench_strategies{
      Strategy::kRandom, Strategy::kJointSpace, Strategy::kFeatureSpace};
  SceneOptions scene = default_scene_options();
  PlannerParams planner;

  int swissroll_points = 2000;
  int swissroll_pieces = 2;
  double swissroll_passage = 0.0;
  std::uint64_t swissroll_seed = 1;
  std::vector<int> swissroll_neighbors{3, 15, 50};
  double swissroll_min_dist = 0.2;

  static TrainConfig desk_train_config();
  static SceneOptions default_scene_options();

  SystemSpec system() const;
  ScaleSchedule schedule() const;
  ScaleSchedule swissroll_schedule() const;
  DatasetOptions dataset_options() const;
  BenchOptions bench_options() const;

  /// Throws InvalidArgument naming the offending key.
  void validate() const;
};

/// Unknown sections or keys are errors, missing ones keep their defaults.
void read_config(std::istream& is, Config& cfg);
Config load_config(const std::string& path);
/// Emits every key, so the output read back reproduces the config.
void write_config(std::ostream& os, const Config& cfg);

}  // namespace conmap

#endif  // CONMAP_CONFIG_HPP_
