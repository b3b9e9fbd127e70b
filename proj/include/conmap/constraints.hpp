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
#ifndef CONMAP_CONSTRAINTS_HPP_
#define CONMAP_CONSTRAINTS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "conmap/kinematics.hpp"

namespace conmap {

/// Chains i and j hold a common rigid object: inverse(T_i) * T_j == desired.
struct GraspPair {
  int i = 0;
  int j = 1;
  Pose2d desired;
  bool operator==(const GraspPair&) const = default;
};

/// Tip orientation of one chain pinned to theta.
struct FixedOrientation {
  int chain = 0;
  double theta = 0.0;
  bool operator==(const FixedOrientation&) const = default;
};

/// Tip of one chain pinned to a world pose on the masked components.
struct PoseTarget {
  int chain = 0;
  Pose2d pose;
  TaskMask mask = TaskMask::position();
  bool operator==(const PoseTarget&) const = default;
};

struct ConstraintSpec {
  std::vector<GraspPair> grasp_pairs;
  std::vector<FixedOrientation> fixed_orientation;
  std::vector<PoseTarget> pose_targets;
  double tol = 1e-8;

  int residual_dim() const;
  bool empty() const {
    return grasp_pairs.empty() && fixed_orientation.empty() &&
           pose_targets.empty();
  }
  bool operator==(const ConstraintSpec&) const = default;
};

struct SystemSpec {
  std::vector<ChainSpec> chains;
  ConstraintSpec constraint;

  int dof() const;
  /// Index of the first joint of chain c in the stacked joint vector.
  int offset(int c) const;
  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;
  void validate() const;
  /// Stable content hash used to tie datasets and labels to a system.
  std::uint64_t hash() const;

  /// Single unconstrained chain.
  static SystemSpec single(ChainSpec chain);

  bool operator==(const SystemSpec&) const = default;
};

/// Joints of chain c inside the stacked system vector.
inline auto chain_segment(const SystemSpec& sys,
                          const Eigen::Ref<const Eigen::VectorXd>& q, int c) {
  return q.segment(sys.offset(c), Eigen::Index(sys.chains[c].dof()));
}

struct ConstraintResidual {
  Eigen::VectorXd values;
  Eigen::MatrixXd jacobian;
};

/// Stack of 3 entries per grasp pair, 1 per fixed-orientation term and one
/// per masked component of each pose target. Angles wrapped to (-pi, pi].
ConstraintResidual residual(const SystemSpec& sys,
                            const Eigen::Ref<const Eigen::VectorXd>& q);

double residual_norm(const SystemSpec& sys,
                     const Eigen::Ref<const Eigen::VectorXd>& q);

enum class ProjectionStatus { kConverged, kMaxIterations, kDiverged, kJointLimits };

struct ProjectionResult {
  ProjectionStatus status = ProjectionStatus::kMaxIterations;
  JointConfig q;
  int iterations = 0;
  double residual = 0.0;

  bool ok() const { return status == ProjectionStatus::kConverged; }
};

struct ProjectionOptions {
  int max_iters = 50;
  double damping = 1e-6;
};

/// Gauss-Newton projection onto the constraint manifold with a damped
/// pseudo-inverse step, clamping to joint limits after each step.
ProjectionResult project(const SystemSpec& sys,
                         const Eigen::Ref<const Eigen::VectorXd>& q,
                         const ProjectionOptions& opts = {});

bool within_limits(const SystemSpec& sys,
                   const Eigen::Ref<const Eigen::VectorXd>& q);

JointConfig sample_uniform(const SystemSpec& sys, Rng& rng);

/// Uniform samples in the joint limits projected onto the manifold. May
/// return fewer than n when projection keeps failing; at most
/// n * attempts_per_sample draws are made.
std::vector<JointConfig> sample_on_manifold(const SystemSpec& sys,
                                            std::uint64_t seed, int n,
                                            int attempts_per_sample = 50);

/// Tip pose of the lead chain (chain 0), which carries the object frame.
Pose2d object_pose(const SystemSpec& sys,
                   const Eigen::Ref<const Eigen::VectorXd>& q);

/// Every chain's required tip pose when the lead tip sits at `object`,
/// following grasp pairs outward from chain 0. Chains not reachable through
/// grasp pairs get std::nullopt.
std::vector<std::optional<Pose2d>> chain_targets(const SystemSpec& sys,
                                                 const Pose2d& object);

struct SystemIkOptions {
  IkOptions ik;
  TaskMask object_mask = TaskMask::full();
  int max_solutions = 32;
};

/// IK of the whole system for a lead-chain tip pose: per-chain restarts,
/// combined and re-projected so every result satisfies the constraint.
std::vector<JointConfig> solve_system_ik(const SystemSpec& sys,
                                         const Pose2d& object,
                                         const SystemIkOptions& opts);

}  // namespace conmap

#endif  // CONMAP_CONSTRAINTS_HPP_
