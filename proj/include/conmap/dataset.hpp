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
#ifndef CONMAP_DATASET_HPP_
#define CONMAP_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "conmap/collision.hpp"
#include "conmap/constraints.hpp"

namespace conmap {

struct ConfigRecord {
  JointConfig q;
  int pose_id = 0;
  Eigen::MatrixXd nullspace;  // n x m, orthonormal columns
  bool collision_free = true;

  bool operator==(const ConfigRecord&) const = default;
};

struct DatasetMeta {
  std::uint64_t seed = 0;
  int n_poses = 0;
  int poses_attempted = 0;
  int max_solutions = 32;
  int n_restarts = 50;

  bool operator==(const DatasetMeta&) const = default;
};

struct ConfigDataset {
  SystemSpec system;
  std::vector<ConfigRecord> records;
  DatasetMeta meta;

  /// Collision-free configurations stacked as rows.
  Eigen::MatrixXd training_matrix() const;
  std::vector<int> training_indices() const;
  /// Integrity token over the system and every record.
  std::string hash() const;

  bool operator==(const ConfigDataset&) const = default;
};

class GenerationFailure : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

struct DatasetOptions {
  SystemIkOptions ik;
  double clearance = kDefaultClearance;
  /// Keep self-colliding solutions, flagged, instead of dropping them.
  bool keep_colliding = false;
  /// Upper bound on pose draws, as a multiple of n_poses.
  int max_draws_factor = 50;
};

/// Basis of the kernel of the constraint Jacobian at q; the identity for an
/// unconstrained system.
Eigen::MatrixXd manifold_nullspace(const SystemSpec& sys,
                                   const Eigen::Ref<const Eigen::VectorXd>& q);

/// Uniform lead-chain tip pose over its reachable annulus, with components
/// pinned by constraints on chain 0 overwritten. Rejects poses that put any
/// grasping chain outside its own annulus. Returns false after max_draws.
bool sample_object_pose(const SystemSpec& sys, Rng& rng, Pose2d& out,
                        int max_draws = 1000);

/// Task-space pose sampling, IK for every chain, constraint projection and
/// self-collision filtering. Pose k uses a seed derived from (seed, k).
ConfigDataset generate_dataset(const SystemSpec& sys, int n_poses,
                               std::uint64_t seed,
                               const DatasetOptions& opts = {});

void save_dataset(const ConfigDataset& ds, const std::string& path);
ConfigDataset load_dataset(const std::string& path);
void write_dataset(std::ostream& os, const ConfigDataset& ds);
ConfigDataset read_dataset(std::istream& is);

struct SwissRollOptions {
  double t_min = 1.5 * kPi;
  double t_max = 4.5 * kPi;
  double height = 21.0;
  /// Axial gap between consecutive pieces.
  double gap = 3.0;
  /// Angle parameter of the bridge centre line.
  double bridge_t = 3.0 * kPi;
};

struct SwissRollSet {
  Eigen::MatrixXd points;         // N x 3
  Eigen::VectorXi piece_label;   // 0..n_pieces-1
  std::vector<bool> passage_label;
  Eigen::MatrixXd intrinsic;      // N x 2, (arc length, height)
};

/// Swiss roll surface points, uniform in area, split along the roll axis
/// into n_pieces separated by gap bands. A positive passage_width adds a
/// bridge strip of that arc-length width across each gap; bridge points
/// belong to the piece below and are flagged as passage points.
SwissRollSet generate_swissroll(int n, int n_pieces, double passage_width,
                                std::uint64_t seed,
                                const SwissRollOptions& opts = {});

}  // namespace conmap

#endif  // CONMAP_DATASET_HPP_
