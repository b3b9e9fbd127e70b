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
#ifndef CONMAP_TESTS_HELPERS_HPP_
#define CONMAP_TESTS_HELPERS_HPP_

#include <cmath>

#include "conmap/constraints.hpp"

namespace conmap::testing {

/// Two 2R arms with bases 3 apart holding a bar between their tips.
/// The grasp is read off a reference configuration so it is satisfied there.
inline SystemSpec dual_2r(JointConfig* reference = nullptr) {
  SystemSpec sys;
  sys.chains.push_back(ChainSpec::uniform({1.0, 1.0}, {-kPi, kPi}, {0, 0, 0}));
  sys.chains.push_back(ChainSpec::uniform({1.0, 1.0}, {-kPi, kPi}, {3, 0, 0}));
  JointConfig q(4);
  q << 0.6, 0.4, 2.2, 0.5;
  const Pose2d ti = forward_kinematics(sys.chains[0], q.head(2));
  const Pose2d tj = forward_kinematics(sys.chains[1], q.tail(2));
  sys.constraint.grasp_pairs.push_back({0, 1, relative(ti, tj)});
  if (reference) *reference = q;
  return sys;
}

/// 3R arm (unit links) with its tip pinned at (1.5, 0). With the first
/// joint limited to [-1.5, 1.5] the self-motion manifold is two disjoint
/// arcs, one per elbow sign.
inline SystemSpec elbow_families() {
  ChainSpec c = ChainSpec::uniform({1.0, 1.0, 1.0});
  c.joint_limits[0] = {-1.5, 1.5};
  SystemSpec sys = SystemSpec::single(c);
  sys.constraint.pose_targets.push_back({0, Pose2d(1.5, 0, 0), TaskMask::position()});
  return sys;
}

/// Closed-form point of elbow_families() at first joint q1 and elbow sign.
inline JointConfig elbow_point(double q1, double sign) {
  const Eigen::Vector2d w(std::cos(q1), std::sin(q1));
  const Eigen::Vector2d d = Eigen::Vector2d(1.5, 0) - w;
  const double c3 = (d.squaredNorm() - 2.0) / 2.0;
  const double q3 = sign * std::acos(c3);
  const double a2 = std::atan2(d.y(), d.x()) - std::atan2(std::sin(q3), 1.0 + std::cos(q3));
  JointConfig q(3);
  q << q1, wrap_angle(a2 - q1), q3;
  return q;
}

/// Finite-difference Jacobian of a vector function by central differences.
template <typename F>
Eigen::MatrixXd numeric_jacobian(F&& f, const Eigen::VectorXd& x, double h) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    J.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

/// max |a - b| / max(1, |b|) elementwise.
inline double max_rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return ((a - b).array().abs() / b.array().abs().max(1.0)).maxCoeff();
}

}  // namespace conmap::testing

#endif  // CONMAP_TESTS_HELPERS_HPP_
