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
#include <cmath>

#include "conmap/collision.hpp"
#include "doctest.h"

using namespace conmap;

TEST_CASE("segment distances") {
  const Eigen::Vector2d a(0, 0), b(2, 0);
  CHECK(point_segment_distance({1, 1}, a, b) == doctest::Approx(1.0));
  CHECK(point_segment_distance({3, 0}, a, b) == doctest::Approx(1.0));
  CHECK(segment_segment_distance(a, b, {1, -1}, {1, 1}) == 0.0);
  CHECK(segment_segment_distance(a, b, {0, 1}, {2, 1}) == doctest::Approx(1.0));
  CHECK(segment_segment_distance(a, b, {3, 1}, {4, 4}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("self collision of simple arms") {
  const SystemSpec straight = SystemSpec::single(ChainSpec::uniform({1.0, 1.0}));
  CHECK(self_collision_free(straight, Eigen::Vector2d(0, 0)));

  const SystemSpec three = SystemSpec::single(ChainSpec::uniform({1.0, 1.0, 1.0}));
  CHECK_FALSE(self_collision_free(three, Eigen::Vector3d(0, kPi * 0.99, kPi * 0.99)));
  CHECK(self_collision_free(three, Eigen::Vector3d(0, 0.5, 0.5)));

  SystemSpec apart;
  apart.chains.push_back(ChainSpec::uniform({1.0, 1.0}, {}, {0, 0, 0}));
  apart.chains.push_back(ChainSpec::uniform({1.0, 1.0}, {}, {10, 0, 0}));
  CHECK(self_collision_free(apart, Eigen::Vector4d::Zero()));

  // Two arms reaching through each other.
  SystemSpec crossing = apart;
  crossing.chains[1].base_pose = Pose2d(1.5, 0, kPi);
  CHECK_FALSE(self_collision_free(crossing, Eigen::Vector4d::Zero()));
}

TEST_CASE("obstacle collision") {
  const SystemSpec sys = SystemSpec::single(ChainSpec::uniform({1.0, 1.0}));
  const Eigen::Vector2d q(0, 0);
  CHECK(collision_free(sys, {{{50, 50}, 1.0}}, q));
  CHECK_FALSE(collision_free(sys, {{{0.5, 0.0}, 0.5}}, q));
  // Tangent: distance from the link to the centre is exactly r + clearance.
  const double r = 0.25;
  CHECK(collision_free(sys, {{{1.0, r + kDefaultClearance}, r}}, q));
  CHECK_FALSE(collision_free(sys, {{{1.0, r + kDefaultClearance - 1e-9}, r}}, q));
}
