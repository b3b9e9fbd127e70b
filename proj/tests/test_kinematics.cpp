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
#include <algorithm>
#include <cmath>

#include "conmap/kinematics.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace conmap;
using conmap::testing::max_rel_err;
using conmap::testing::numeric_jacobian;

namespace {

ChainSpec two_link() { return ChainSpec::uniform({1.0, 1.0}); }

Eigen::Vector3d pose_vec(const Pose2d& p) { return {p.x, p.y, p.theta}; }

// Elbow-down and elbow-up closed forms for a 2R arm with unit links.
std::vector<Eigen::Vector2d> analytic_2r(double x, double y) {
  const double c2 = (x * x + y * y - 2.0) / 2.0;
  std::vector<Eigen::Vector2d> out;
  for (double sign : {1.0, -1.0}) {
    const double q2 = sign * std::acos(std::clamp(c2, -1.0, 1.0));
    const double q1 = std::atan2(y, x) - std::atan2(std::sin(q2), 1.0 + std::cos(q2));
    out.push_back({wrap_angle(q1), wrap_angle(q2)});
  }
  return out;
}

}  // namespace

TEST_CASE("forward kinematics of a straight and bent 2R arm") {
  const ChainSpec c = two_link();
  const Pose2d a = forward_kinematics(c, Eigen::Vector2d(0, 0));
  CHECK(a.x == doctest::Approx(2.0));
  CHECK(a.y == doctest::Approx(0.0));
  CHECK(a.theta == doctest::Approx(0.0));

  const Pose2d b = forward_kinematics(c, Eigen::Vector2d(kPi / 2, 0));
  CHECK(b.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.y == doctest::Approx(2.0));
  CHECK(b.theta == doctest::Approx(kPi / 2));

  const Pose2d e = forward_kinematics(c, Eigen::Vector2d(0, kPi / 2));
  CHECK(e.x == doctest::Approx(1.0));
  CHECK(e.y == doctest::Approx(1.0));
  CHECK(e.theta == doctest::Approx(kPi / 2));
}

TEST_CASE("forward kinematics rejects a wrong joint count") {
  CHECK_THROWS_AS(forward_kinematics(two_link(), Eigen::Vector3d(0, 0, 0)),
                  InvalidArgument);
  CHECK_THROWS_AS(jacobian(two_link(), Eigen::Vector3d(0, 0, 0)),
                  InvalidArgument);
}

TEST_CASE("jacobian at the straight pose") {
  const auto J = jacobian(two_link(), Eigen::Vector2d(0, 0));
  CHECK((J.col(0) - Eigen::Vector3d(0, 2, 1)).norm() < 1e-12);
  CHECK((J.col(1) - Eigen::Vector3d(0, 1, 1)).norm() < 1e-12);
}

TEST_CASE("jacobian matches finite differences on random chains") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng.uniform_index(6));
    std::vector<double> lengths;
    for (int k = 0; k < n; ++k) lengths.push_back(rng.uniform(0.2, 1.5));
    const ChainSpec c = ChainSpec::uniform(
        lengths, {}, Pose2d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-3, 3)));
    Eigen::VectorXd q(n);
    for (int k = 0; k < n; ++k) q(k) = rng.uniform(-3, 3);
    const Eigen::MatrixXd J = jacobian(c, q);
    CHECK((J.row(2).array() == 1.0).all());
    // Unwrapped theta so the difference quotient has no 2pi jumps.
    const Eigen::MatrixXd Jn = numeric_jacobian(
        [&](const Eigen::VectorXd& x) {
          Pose2d p = forward_kinematics(c, x);
          Eigen::Vector3d v = pose_vec(p);
          v(2) = c.base_pose.theta + x.sum();
          return Eigen::VectorXd(v);
        },
        q, 1e-6);
    CHECK(max_rel_err(J, Jn) < 1e-4);
  }
}

TEST_CASE("first-order prediction of FK displacement") {
  Rng rng(3);
  const ChainSpec c = ChainSpec::uniform({0.7, 0.4, 0.9});
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd q(3), dq(3);
    for (int k = 0; k < 3; ++k) {
      q(k) = rng.uniform(-3, 3);
      dq(k) = rng.uniform(-1, 1) * 1e-6;
    }
    const Eigen::Vector3d pred = jacobian(c, q) * dq;
    Eigen::Vector3d actual = pose_vec(forward_kinematics(c, Eigen::VectorXd(q + dq))) -
                             pose_vec(forward_kinematics(c, q));
    actual(2) = wrap_angle(actual(2));
    CHECK((pred - actual).norm() / pred.norm() < 1e-4);
  }
}

TEST_CASE("null-space basis of simple matrices") {
  CHECK(nullspace_basis(Eigen::Matrix3d::Identity()).cols() == 0);
  Eigen::MatrixXd J(2, 3);
  J << 1, 0, 0, 0, 1, 0;
  const Eigen::MatrixXd B = nullspace_basis(J);
  REQUIRE(B.cols() == 1);
  CHECK(std::abs(std::abs(B(2, 0)) - 1.0) < 1e-12);
  CHECK(B.col(0).head(2).norm() < 1e-12);
}

TEST_CASE("null-space basis of a positioned 3R arm is orthonormal") {
  Rng rng(5);
  const ChainSpec c = ChainSpec::uniform({1, 1, 1});
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd q(3);
    for (int k = 0; k < 3; ++k) q(k) = rng.uniform(-3, 3);
    const Eigen::MatrixXd J = jacobian(c, q).topRows(2);
    const Eigen::MatrixXd B = nullspace_basis(J);
    REQUIRE(B.cols() == 1);
    CHECK((J * B).norm() <= 1e-9);
    CHECK(std::abs(B.col(0).norm() - 1.0) <= 1e-9);
  }
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Random(2, 6);
    const Eigen::MatrixXd B = nullspace_basis(J);
    REQUIRE(B.cols() == 4);
    CHECK((B.transpose() * B - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-9);
    CHECK((J * B).norm() <= 1e-9);
  }
}

TEST_CASE("2R IK returns the two analytic branches at (1, 1)") {
  const auto sols = solve_ik(two_link(), Pose2d(1, 1, 0), TaskMask::position(), 50, 1e-10);
  REQUIRE(sols.size() == 2);
  std::vector<Eigen::Vector2d> expect{{0, kPi / 2}, {kPi / 2, -kPi / 2}};
  for (const auto& e : expect) {
    const bool found = std::any_of(sols.begin(), sols.end(), [&](const JointConfig& s) {
      return (s - e).norm() < 1e-6;
    });
    CHECK(found);
  }
}

TEST_CASE("2R IK for 100 random reachable targets matches the closed form") {
  Rng rng(2024);
  const ChainSpec c = two_link();
  for (int trial = 0; trial < 100; ++trial) {
    // Keep away from the singular boundary circles.
    const double r = rng.uniform(0.2, 1.9), phi = rng.uniform(-kPi, kPi);
    const double x = r * std::cos(phi), y = r * std::sin(phi);
    IkOptions o;
    o.n_restarts = 50;
    o.tol = 1e-10;
    o.seed = std::uint64_t(trial);
    const auto sols = solve_ik(c, Pose2d(x, y, 0), TaskMask::position(), o);
    REQUIRE(sols.size() == 2);
    for (const auto& e : analytic_2r(x, y)) {
      const bool found = std::any_of(sols.begin(), sols.end(), [&](const JointConfig& s) {
        Eigen::Vector2d d = s - e;
        d(0) = wrap_angle(d(0));
        d(1) = wrap_angle(d(1));
        return d.norm() < 1e-6;
      });
      CHECK(found);
    }
  }
}

TEST_CASE("IK outside the annulus is empty") {
  CHECK(solve_ik(two_link(), Pose2d(3, 0, 0), TaskMask::position(), 50, 1e-8).empty());
}

TEST_CASE("3R IK at (1.5, 0) spans both elbow families") {
  const ChainSpec c = ChainSpec::uniform({1, 1, 1}, {-kPi, kPi});
  const auto sols = solve_ik(c, Pose2d(1.5, 0, 0), TaskMask::position(), 200, 1e-8, 9);
  CHECK(sols.size() >= 4);
  bool up = false, down = false;
  for (const auto& s : sols) {
    CHECK(task_error(c, Pose2d(1.5, 0, 0), TaskMask::position(), s).norm() <= 1e-8);
    CHECK(within_limits(c, s));
    (s(1) > 0 ? up : down) = true;
  }
  CHECK(up);
  CHECK(down);
  for (std::size_t a = 0; a < sols.size(); ++a)
    for (std::size_t b = a + 1; b < sols.size(); ++b)
      CHECK((sols[a] - sols[b]).norm() >= 0.05);
}

TEST_CASE("IK solutions respect the mask and the limits") {
  Rng rng(8);
  const ChainSpec c = ChainSpec::uniform({0.8, 0.6, 0.5, 0.3}, {-2.0, 2.0});
  for (int trial = 0; trial < 20; ++trial) {
    const Pose2d target(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-3, 3));
    for (TaskMask mask : {TaskMask::position(), TaskMask::full()}) {
      for (const auto& s : solve_ik(c, target, mask, 30, 1e-9, std::uint64_t(trial))) {
        CHECK(task_error(c, target, mask, s).norm() <= 1e-9);
        CHECK(within_limits(c, s));
      }
    }
  }
}

TEST_CASE("angle wrapping is idempotent and lands in (-pi, pi]") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const double t = rng.uniform(-50, 50);
    const double w = wrap_angle(t);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(wrap_angle(w) == w);
  }
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  const Pose2d p = compose(Pose2d(0, 0, 3.0), Pose2d(1, 0, 3.0));
  CHECK(p.theta > -kPi);
  CHECK(p.theta <= kPi);
}

TEST_CASE("chain validation") {
  CHECK_THROWS_AS(ChainSpec::uniform({1.0, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(ChainSpec::uniform({1.0, 1.0}, {1.0, 0.5}), InvalidArgument);
  ChainSpec c = ChainSpec::uniform({1.0, 1.0});
  c.joint_limits.pop_back();
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}
