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
#include <map>
#include <sstream>

#include "conmap/dataset.hpp"
#include "conmap/oracle.hpp"
#include "conmap/embedder.hpp"
#include "conmap/textio.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace conmap;

namespace {

SystemSpec dual_4r() {
  SystemSpec sys;
  const JointLimit lim{-2.5, 2.5};
  sys.chains.push_back(ChainSpec::uniform({0.6, 0.5, 0.4, 0.25}, lim, {-0.6, 0, kPi / 2}));
  sys.chains.push_back(ChainSpec::uniform({0.6, 0.5, 0.4, 0.25}, lim, {0.6, 0, kPi / 2}));
  sys.constraint.grasp_pairs.push_back({0, 1, Pose2d(0.5, 0, kPi)});
  sys.constraint.fixed_orientation.push_back({0, 0.0});
  return sys;
}

const ConfigDataset& small_dual() {
  static const ConfigDataset ds = generate_dataset(dual_4r(), 8, 21);
  return ds;
}

std::string serialized(const ConfigDataset& ds) {
  std::ostringstream os;
  write_dataset(os, ds);
  return os.str();
}

int knn_components(const Eigen::MatrixXd& P, const std::vector<bool>& keep, int k) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (keep[i]) idx.push_back(int(i));
  Eigen::MatrixXd Q(idx.size(), P.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) Q.row(r) = P.row(idx[r]);
  const KnnGraph g = knn_graph(Q, k);
  UnionFind uf(int(idx.size()));
  for (Eigen::Index i = 0; i < Q.rows(); ++i)
    for (int c = 0; c < k; ++c) uf.unite(int(i), g.indices(i, c));
  const auto labels = component_labels(uf, int(idx.size()));
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

}  // namespace

TEST_CASE("2R position-only dataset matches the closed-form IK") {
  const SystemSpec sys = SystemSpec::single(ChainSpec::uniform({1.0, 0.8}));
  DatasetOptions opts;
  opts.ik.object_mask = TaskMask::position();
  const ConfigDataset ds = generate_dataset(sys, 10, 3, opts);
  REQUIRE(!ds.records.empty());
  std::map<int, int> per_pose;
  for (const auto& r : ds.records) ++per_pose[r.pose_id];
  for (const auto& [pose, count] : per_pose) CHECK(count <= 2);
  CHECK(per_pose.size() == 10);
  for (const auto& r : ds.records) {
    // Elbow angle from the law of cosines at the FK tip distance.
    const Pose2d tip = forward_kinematics(sys.chains[0], r.q);
    const double d2 = tip.translation().squaredNorm();
    CHECK(std::cos(r.q[1]) == doctest::Approx((d2 - 1.0 - 0.64) / 1.6).epsilon(1e-9));
    CHECK(r.nullspace.cols() == 2);
  }
}

TEST_CASE("dual-arm records satisfy the constraint with orthonormal null spaces") {
  const ConfigDataset& ds = small_dual();
  REQUIRE(!ds.records.empty());
  for (const auto& r : ds.records) {
    CHECK(residual_norm(ds.system, r.q) <= 1e-8);
    CHECK(r.collision_free);
    CHECK(self_collision_free(ds.system, r.q));
    REQUIRE(r.nullspace.rows() == 8);
    CHECK(r.nullspace.cols() == 8 - 4);
    const Eigen::MatrixXd G = r.nullspace.transpose() * r.nullspace;
    CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).norm() < 1e-9);
    CHECK((residual(ds.system, r.q).jacobian * r.nullspace).norm() < 1e-8);
  }
  CHECK(ds.training_matrix().rows() == Eigen::Index(ds.training_indices().size()));
  CHECK(ds.meta.n_poses == 8);
}

TEST_CASE("generation is deterministic") {
  const ConfigDataset b = generate_dataset(dual_4r(), 8, 21);
  CHECK(serialized(small_dual()) == serialized(b));
  CHECK(small_dual().hash() == b.hash());
  CHECK(serialized(generate_dataset(dual_4r(), 8, 22)) != serialized(b));
}

TEST_CASE("unreachable systems fail with diagnostics") {
  SystemSpec sys = dual_4r();
  sys.chains[1].base_pose = Pose2d(40, 0, 0);
  try {
    generate_dataset(sys, 3, 1);
    FAIL("expected failure");
  } catch (const GenerationFailure& e) {
    CHECK(std::string(e.what()).find("pose") != std::string::npos);
  }
  CHECK_THROWS_AS(generate_dataset(dual_4r(), 0, 1), InvalidArgument);
}

TEST_CASE("colliding solutions are flagged and kept out of training") {
  const SystemSpec sys = SystemSpec::single(ChainSpec::uniform({1.0, 1.0, 1.0}));
  DatasetOptions opts;
  opts.keep_colliding = true;
  opts.ik.object_mask = TaskMask::position();
  const ConfigDataset ds = generate_dataset(sys, 30, 8, opts);
  const auto train = ds.training_indices();
  for (int i : train) CHECK(ds.records[i].collision_free);
  for (std::size_t i = 0; i < ds.records.size(); ++i)
    CHECK(ds.records[i].collision_free == self_collision_free(sys, ds.records[i].q));
}

TEST_CASE("dataset text round trip") {
  const ConfigDataset& ds = small_dual();
  const std::string text = serialized(ds);
  std::istringstream is(text);
  const ConfigDataset back = read_dataset(is);
  CHECK(back == ds);
  CHECK(back.hash() == ds.hash());
  CHECK(serialized(back) == text);
}

TEST_CASE("truncated and corrupted dataset files are rejected") {
  const std::string text = serialized(small_dual());
  {
    std::istringstream is(text.substr(0, text.size() * 2 / 3));
    CHECK_THROWS_AS(read_dataset(is), ParseError);
  }
  {
    std::istringstream is("");
    CHECK_THROWS_AS(read_dataset(is), ParseError);
  }
  {
    std::string bad = text;
    bad.replace(bad.find("conmap\t1"), 8, "conmap\t9");
    std::istringstream is(bad);
    CHECK_THROWS_AS(read_dataset(is), UnsupportedVersion);
  }
  {
    // Flip one digit in the last record.
    std::string bad = text;
    const auto pos = bad.find_last_of("123456789");
    bad[pos] = bad[pos] == '1' ? '2' : '1';
    std::istringstream is(bad);
    CHECK_THROWS(read_dataset(is));
  }
  {
    std::string bad = text;
    const auto pos = bad.rfind("\nr\t");
    bad.insert(pos + 3, "x");
    std::istringstream is(bad);
    try {
      read_dataset(is);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() > 1);
    }
  }
}

TEST_CASE("Swiss roll pieces") {
  const SwissRollSet one = generate_swissroll(500, 1, 0.0, 1);
  CHECK(one.points.rows() == 500);
  CHECK((one.piece_label.array() == 0).all());

  const SwissRollSet two = generate_swissroll(3000, 2, 0.0, 2);
  CHECK(two.piece_label.minCoeff() == 0);
  CHECK(two.piece_label.maxCoeff() == 1);
  double min_cross = 1e300;
  for (Eigen::Index i = 0; i < two.points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < two.points.rows(); ++j)
      if (two.piece_label(i) != two.piece_label(j))
        min_cross = std::min(min_cross, (two.points.row(i) - two.points.row(j)).norm());
  CHECK(min_cross >= SwissRollOptions{}.gap);
  const std::vector<bool> all(3000, true);
  CHECK(knn_components(two.points, all, 10) == 2);
}

TEST_CASE("a narrow passage joins the pieces") {
  const SwissRollSet sr = generate_swissroll(3000, 2, 0.1, 3);
  const auto n_passage = std::count(sr.passage_label.begin(), sr.passage_label.end(), true);
  CHECK(n_passage > 0);
  const std::vector<bool> all(3000, true);
  CHECK(knn_components(sr.points, all, 10) == 1);
  std::vector<bool> no_passage(3000);
  for (int i = 0; i < 3000; ++i) no_passage[i] = !sr.passage_label[i];
  CHECK(knn_components(sr.points, no_passage, 10) >= 2);
  for (int i = 0; i < 3000; ++i)
    if (sr.passage_label[i]) CHECK(sr.piece_label(i) == 0);
}

TEST_CASE("Swiss roll generation is deterministic") {
  CHECK(generate_swissroll(300, 3, 0.2, 4).points == generate_swissroll(300, 3, 0.2, 4).points);
  CHECK_THROWS_AS(generate_swissroll(300, 0, 0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(generate_swissroll(300, 2, -1.0, 4), InvalidArgument);
}
