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
#ifndef CONMAP_PLANNER_HPP_
#define CONMAP_PLANNER_HPP_

#include <cstdint>
#include <vector>

#include "conmap/collision.hpp"

namespace conmap {

struct PlannerParams {
  double step_size = 0.1;
  double resolution = 0.02;
  int connect_every = 10;
  double time_limit = 5.0;
  /// 0 means unbounded; when set, the search stops after this many tree
  /// expansions regardless of the clock.
  long long max_expansions = 0;
  double clearance = kDefaultClearance;
};

struct PlanningProblem {
  SystemSpec system;
  JointConfig q_start;
  JointConfig q_goal;
  std::vector<Obstacle> obstacles;
  PlannerParams params;
  std::uint64_t seed = 0;
};

struct PlanResult {
  bool success = false;
  std::vector<JointConfig> path;
  double elapsed = 0.0;
  long long nodes_expanded = 0;
};

class PlanningError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Joint-space interpolation from q_a to q_b in steps of at most
/// `resolution`, continuing each projected point into the next. Every
/// intermediate must project, stay collision-free and remain within
/// `max_drift` of the straight interpolant.
bool local_path_valid(const SystemSpec& sys,
                      const std::vector<Obstacle>& obstacles,
                      const Eigen::Ref<const Eigen::VectorXd>& q_a,
                      const Eigen::Ref<const Eigen::VectorXd>& q_b,
                      double resolution, double max_drift = 0.1,
                      double clearance = kDefaultClearance);

/// Bidirectional RRT on the constraint manifold. Throws PlanningError when
/// an endpoint is off-manifold or in collision.
PlanResult plan(const PlanningProblem& problem);

/// End-to-end check of a returned path: on-manifold, collision-free and
/// consecutive waypoints no farther apart than the step size.
bool validate_path(const PlanningProblem& problem,
                   const std::vector<JointConfig>& path);

}  // namespace conmap

#endif  // CONMAP_PLANNER_HPP_
