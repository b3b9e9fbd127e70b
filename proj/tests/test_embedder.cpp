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

#include "conmap/dataset.hpp"
#include "conmap/embedder.hpp"
#include "doctest.h"

using namespace conmap;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
  return X;
}

double min_cross_distance(const Eigen::MatrixXd& Y, const Eigen::VectorXi& piece) {
  double best = 1e300;
  for (Eigen::Index i = 0; i < Y.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.rows(); ++j)
      if (piece(i) != piece(j)) best = std::min(best, (Y.row(i) - Y.row(j)).norm());
  return best;
}

}  // namespace

TEST_CASE("kNN on three collinear points") {
  Eigen::MatrixXd X(3, 1);
  X << 0, 1, 3;
  const KnnGraph g = knn_graph(X, 1);
  CHECK(g.indices(0, 0) == 1);
  CHECK(g.indices(1, 0) == 0);
  CHECK(g.indices(2, 0) == 1);
  CHECK(g.distances(2, 0) == doctest::Approx(2.0));
}

TEST_CASE("kNN keeps zero-distance duplicates and excludes self") {
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 0, 0, 5, 5, 5, 5;
  const KnnGraph g = knn_graph(X, 1);
  for (int i = 0; i < 4; ++i) {
    CHECK(g.indices(i, 0) != i);
    CHECK(g.distances(i, 0) == 0.0);
  }
  CHECK(g.indices(0, 0) == 1);
  CHECK(g.indices(3, 0) == 2);
}

TEST_CASE("kNN matches a brute-force scan") {
  const Eigen::MatrixXd X = random_matrix(100, 5, 11);
  const KnnGraph g = knn_graph(X, 10);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    std::vector<std::pair<double, int>> all;
    for (Eigen::Index j = 0; j < X.rows(); ++j)
      if (j != i) all.emplace_back((X.row(i) - X.row(j)).norm(), int(j));
    std::sort(all.begin(), all.end());
    for (int c = 0; c < 10; ++c) {
      CHECK(g.indices(i, c) == all[c].second);
      CHECK(g.distances(i, c) == doctest::Approx(all[c].first).epsilon(1e-14));
      // d(i, j) == d(j, i)
      const int j = g.indices(i, c);
      CHECK(g.distances(i, c) == doctest::Approx((X.row(j) - X.row(i)).norm()).epsilon(1e-14));
    }
  }
}

TEST_CASE("kNN rejects k >= N") {
  const Eigen::MatrixXd X = random_matrix(5, 2, 1);
  CHECK_THROWS_AS(knn_graph(X, 5), InvalidArgument);
  CHECK_THROWS_AS(knn_graph(X, 0), InvalidArgument);
}

TEST_CASE("output curve parameters") {
  const CurveParams ab = fit_curve_params(0.1);
  CHECK(ab.a == doctest::Approx(1.577).epsilon(2e-3));
  CHECK(ab.b == doctest::Approx(0.895).epsilon(2e-3));
  // Larger min_dist flattens the curve near zero.
  const CurveParams wide = fit_curve_params(0.5);
  auto phi = [](const CurveParams& p, double d) { return 1.0 / (1.0 + p.a * std::pow(d, 2 * p.b)); };
  CHECK(phi(wide, 0.4) > phi(ab, 0.4));
}

TEST_CASE("fuzzy graph weights are symmetric memberships") {
  const Eigen::MatrixXd X = random_matrix(60, 3, 2);
  const FuzzyGraph fg = fuzzy_simplicial_set(knn_graph(X, 6));
  REQUIRE(!fg.weight.empty());
  std::map<std::pair<int, int>, double> w;
  for (std::size_t e = 0; e < fg.weight.size(); ++e) {
    CHECK(fg.weight[e] > 0.0);
    CHECK(fg.weight[e] <= 1.0 + 1e-12);
    CHECK(fg.head[e] != fg.tail[e]);
    w[{fg.head[e], fg.tail[e]}] = fg.weight[e];
  }
  for (const auto& [key, value] : w) {
    const auto it = w.find({key.second, key.first});
    if (it != w.end()) CHECK(it->second == doctest::Approx(value));
  }
  // Every point keeps its nearest neighbour at full membership.
  std::vector<double> best(60, 0.0);
  for (std::size_t e = 0; e < fg.weight.size(); ++e)
    best[fg.head[e]] = std::max(best[fg.head[e]], fg.weight[e]);
  for (double b : best) CHECK(b == doctest::Approx(1.0));
}

TEST_CASE("embedding parameters are validated") {
  const Eigen::MatrixXd X = random_matrix(20, 3, 3);
  EmbedParams p;
  p.n_neighbors = 20;
  CHECK_THROWS_AS(embed(X, p), InvalidArgument);
  p.n_neighbors = 1;
  CHECK_THROWS_AS(embed(X, p), InvalidArgument);
  p = {};
  p.n_neighbors = 5;
  p.min_dist = 1.0;
  CHECK_THROWS_AS(embed(X, p), InvalidArgument);
  p.min_dist = 0.1;
  p.out_dim = 4;
  CHECK_THROWS_AS(embed(X, p), InvalidArgument);
}

TEST_CASE("embedding is deterministic and finite") {
  const SwissRollSet sr = generate_swissroll(400, 1, 0.0, 5);
  EmbedParams p;
  p.n_neighbors = 10;
  p.n_epochs = 100;
  p.seed = 42;
  const LatentEmbedding a = embed(sr.points, p);
  const LatentEmbedding b = embed(sr.points, p);
  REQUIRE(a.coords.rows() == 400);
  CHECK(a.coords.cols() == 2);
  CHECK(a.coords.allFinite());
  CHECK(a.coords == b.coords);
  p.seed = 43;
  CHECK(embed(sr.points, p).coords != a.coords);
  p.out_dim = 3;
  CHECK(embed(sr.points, p).coords.cols() == 3);
}

TEST_CASE("identical points collapse near the origin") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(50, 4, 0.7);
  EmbedParams p;
  p.n_neighbors = 5;
  const LatentEmbedding e = embed(X, p);
  CHECK(e.coords.rowwise().norm().maxCoeff() <= 1e-3);
}

TEST_CASE("duplicated rows share a latent position") {
  Eigen::MatrixXd X = random_matrix(80, 3, 9);
  X.row(10) = X.row(3);
  X.row(50) = X.row(3);
  EmbedParams p;
  p.n_neighbors = 8;
  p.n_epochs = 50;
  const LatentEmbedding e = embed(X, p);
  CHECK(e.coords.row(10) == e.coords.row(3));
  CHECK(e.coords.row(50) == e.coords.row(3));
}

TEST_CASE("latent neighbourhoods overlap the input neighbourhoods") {
  const SwissRollSet sr = generate_swissroll(2000, 1, 0.0, 1);
  EmbedParams p;
  p.n_neighbors = 15;
  p.min_dist = 0.1;
  p.seed = 7;
  const LatentEmbedding e = embed(sr.points, p);
  const double jac = neighborhood_jaccard(sr.points, e.coords, 15);
  MESSAGE("jaccard " << jac);
  CHECK(jac >= 0.3);
  CHECK(neighborhood_jaccard(sr.points, sr.points, 15) == doctest::Approx(1.0));
}

TEST_CASE("disconnected pieces stay apart in the latent space") {
  const SwissRollSet sr = generate_swissroll(1000, 2, 0.0, 2);
  EmbedParams p;
  p.n_neighbors = 5;
  p.seed = 3;
  const LatentEmbedding e = embed(sr.points, p);
  const KnnGraph g = knn_graph(e.coords, 1);
  std::vector<double> nn(g.distances.data(), g.distances.data() + g.distances.size());
  std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
  const double median = nn[nn.size() / 2];
  const double linkage = min_cross_distance(e.coords, sr.piece_label);
  MESSAGE("linkage " << linkage << " median " << median);
  CHECK(linkage > 3.0 * median);
}
