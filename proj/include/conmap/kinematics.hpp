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
#ifndef CONMAP_KINEMATICS_HPP_
#define CONMAP_KINEMATICS_HPP_

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "conmap/common.hpp"

namespace conmap {

/// Rigid transform in the plane. theta stays in (-pi, pi].
template <typename Scalar>
struct PlanarPose {
  Scalar x{0};
  Scalar y{0};
  Scalar theta{0};

  PlanarPose() = default;
  PlanarPose(Scalar x_, Scalar y_, Scalar theta_)
      : x(x_), y(y_), theta(wrap_angle(theta_)) {}

  Eigen::Matrix<Scalar, 2, 1> translation() const { return {x, y}; }

  template <typename Other>
  PlanarPose<Other> cast() const {
    return {Other(x), Other(y), Other(theta)};
  }

  bool operator==(const PlanarPose&) const = default;
};

using Pose2d = PlanarPose<double>;

/// a * b: express b (given in a's frame) in the frame a is expressed in.
template <typename Scalar>
PlanarPose<Scalar> compose(const PlanarPose<Scalar>& a,
                           const PlanarPose<Scalar>& b) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a.theta), s = sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, a.theta + b.theta};
}

template <typename Scalar>
PlanarPose<Scalar> inverse(const PlanarPose<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a.theta), s = sin(a.theta);
  return {-(c * a.x + s * a.y), s * a.x - c * a.y, -a.theta};
}

/// inverse(a) * b
template <typename Scalar>
PlanarPose<Scalar> relative(const PlanarPose<Scalar>& a,
                            const PlanarPose<Scalar>& b) {
  return compose(inverse(a), b);
}

struct JointLimit {
  double lo = -kPi;
  double hi = kPi;
  bool operator==(const JointLimit&) const = default;
};

/// Planar serial chain of revolute joints. Joint k rotates link k about the
/// distal end of link k-1 (the base pose for k = 0).
struct ChainSpec {
  std::vector<double> link_lengths;
  std::vector<JointLimit> joint_limits;
  Pose2d base_pose;

  std::size_t dof() const { return link_lengths.size(); }
  double reach() const;
  /// Throws InvalidArgument when lengths, limits or counts are inconsistent.
  void validate() const;

  /// Builds a chain with the same limit on every joint.
  static ChainSpec uniform(std::vector<double> lengths, JointLimit limit = {},
                           Pose2d base = {});

  bool operator==(const ChainSpec&) const = default;
};

/// Which components of an (x, y, theta) task error are constrained.
struct TaskMask {
  bool x = true;
  bool y = true;
  bool theta = true;

  static constexpr TaskMask full() { return {true, true, true}; }
  static constexpr TaskMask position() { return {true, true, false}; }
  int count() const { return int(x) + int(y) + int(theta); }
  bool operator==(const TaskMask&) const = default;
};

namespace detail {
inline void check_dims(const ChainSpec& chain, Eigen::Index n) {
  if (Eigen::Index(chain.dof()) != n)
    throw InvalidArgument("joint vector has " + std::to_string(n) +
                          " entries, chain has " +
                          std::to_string(chain.dof()) + " joints");
}
}  // namespace detail

/// Positions of the base, every joint and the tip: (dof + 1) x 2.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 2> link_points(
    const ChainSpec& chain, const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  using std::cos;
  using std::sin;
  detail::check_dims(chain, q.size());
  const Eigen::Index n = q.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> pts(n + 1, 2);
  Scalar x(chain.base_pose.x), y(chain.base_pose.y);
  Scalar theta(chain.base_pose.theta);
  pts(0, 0) = x;
  pts(0, 1) = y;
  for (Eigen::Index k = 0; k < n; ++k) {
    theta += q(k);
    x += Scalar(chain.link_lengths[k]) * cos(theta);
    y += Scalar(chain.link_lengths[k]) * sin(theta);
    pts(k + 1, 0) = x;
    pts(k + 1, 1) = y;
  }
  return pts;
}

/// End-effector pose; the tip frame's x-axis runs along the last link.
template <typename Derived>
PlanarPose<typename Derived::Scalar> forward_kinematics(
    const ChainSpec& chain, const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  using std::cos;
  using std::sin;
  detail::check_dims(chain, q.size());
  Scalar x(chain.base_pose.x), y(chain.base_pose.y);
  Scalar theta(chain.base_pose.theta);
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    theta += q(k);
    x += Scalar(chain.link_lengths[k]) * cos(theta);
    y += Scalar(chain.link_lengths[k]) * sin(theta);
  }
  return {x, y, theta};
}

/// Rows are d(x, y, theta)/dq of the tip in the world frame.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, Eigen::Dynamic> jacobian(
    const ChainSpec& chain, const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  const auto pts = link_points(chain, q);
  const Eigen::Index n = q.size();
  Eigen::Matrix<Scalar, 3, Eigen::Dynamic> J(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    J(0, k) = -(pts(n, 1) - pts(k, 1));
    J(1, k) = pts(n, 0) - pts(k, 0);
    J(2, k) = Scalar(1);
  }
  return J;
}

/// Orthonormal basis of ker(J), n x (n - rank). Singular values below
/// 1e-8 * sigma_max count as zero.
Eigen::MatrixXd nullspace_basis(const Eigen::Ref<const Eigen::MatrixXd>& J);

/// Masked task error target - FK(q) (angle wrapped), as a compact vector.
Eigen::VectorXd task_error(const ChainSpec& chain, const Pose2d& target,
                           TaskMask mask, const Eigen::Ref<const Eigen::VectorXd>& q);

struct IkOptions {
  int n_restarts = 50;
  double tol = 1e-8;
  int max_iters = 100;
  double damping = 1e-3;
  double dedupe_distance = 0.05;
  int max_solutions = 32;
  std::uint64_t seed = 0;
};

/// Damped least squares from one start; returns true and writes q on
/// convergence inside the joint limits.
bool refine_ik(const ChainSpec& chain, const Pose2d& target, TaskMask mask,
               Eigen::VectorXd& q, const IkOptions& opts);

/// Damped least-squares IK with uniform random restarts inside the joint
/// limits. Solutions closer than opts.dedupe_distance are merged; the list
/// is empty when the target is unreachable.
std::vector<JointConfig> solve_ik(const ChainSpec& chain, const Pose2d& target,
                                  TaskMask mask, const IkOptions& opts);

std::vector<JointConfig> solve_ik(const ChainSpec& chain, const Pose2d& target,
                                  TaskMask mask, int n_restarts, double tol,
                                  std::uint64_t seed = 0);

bool within_limits(const ChainSpec& chain,
                   const Eigen::Ref<const Eigen::VectorXd>& q);

}  // namespace conmap

#endif  // CONMAP_KINEMATICS_HPP_
