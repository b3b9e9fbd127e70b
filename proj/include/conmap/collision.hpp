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
#ifndef CONMAP_COLLISION_HPP_
#define CONMAP_COLLISION_HPP_

#include <vector>

#include "conmap/constraints.hpp"

namespace conmap {

/// Workspace disk.
struct Obstacle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.1;
};

inline constexpr double kDefaultClearance = 0.02;

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b);

double segment_segment_distance(const Eigen::Vector2d& a0,
                                const Eigen::Vector2d& a1,
                                const Eigen::Vector2d& b0,
                                const Eigen::Vector2d& b1);

/// True iff every pair of non-adjacent link segments, within a chain or
/// across chains, is separated by at least `clearance`.
bool self_collision_free(const SystemSpec& sys,
                         const Eigen::Ref<const Eigen::VectorXd>& q,
                         double clearance = kDefaultClearance);

/// Self-collision plus link/disk tests. A link whose distance to an
/// obstacle centre equals radius + clearance is still free.
bool collision_free(const SystemSpec& sys, const std::vector<Obstacle>& obstacles,
                    const Eigen::Ref<const Eigen::VectorXd>& q,
                    double clearance = kDefaultClearance);

}  // namespace conmap

#endif  // CONMAP_COLLISION_HPP_
