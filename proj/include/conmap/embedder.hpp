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
#ifndef CONMAP_EMBEDDER_HPP_
#define CONMAP_EMBEDDER_HPP_

#include <cstdint>

#include "conmap/common.hpp"

namespace conmap {

/// Exact k nearest neighbours under the Euclidean distance, self excluded.
/// Row i lists neighbours by (distance, index) ascending.
struct KnnGraph {
  Eigen::MatrixXi indices;
  Eigen::MatrixXd distances;

  Eigen::Index size() const { return indices.rows(); }
  Eigen::Index k() const { return indices.cols(); }
};

/// Brute-force scan over all pairs. Throws InvalidArgument when k >= N.
KnnGraph knn_graph(const Eigen::Ref<const Eigen::MatrixXd>& X, int k);

/// Layout initialisation. Spectral uses the leading non-trivial eigenvectors
/// of the normalised graph Laplacian per connected component.
enum class EmbedInit { kSpectral, kRandom };

struct EmbedParams {
  int n_neighbors = 15;
  double min_dist = 0.1;
  int out_dim = 2;
  int n_epochs = 300;
  int negative_sample_rate = 5;
  double spread = 1.0;
  std::uint64_t seed = 0;
  EmbedInit init = EmbedInit::kSpectral;

  void validate(Eigen::Index n_points) const;
};

struct LatentEmbedding {
  Eigen::MatrixXd coords;  // N x out_dim
  EmbedParams params;
};

/// Parameters of the low-dimensional similarity 1 / (1 + a d^(2b)).
struct CurveParams {
  double a = 1.0;
  double b = 1.0;
};

/// Least-squares fit of the curve to the offset-exponential target defined
/// by min_dist and spread on 300 points over [0, 3 * spread].
CurveParams fit_curve_params(double min_dist, double spread = 1.0);

/// Symmetric fuzzy neighbourhood graph as an edge list (both directions).
struct FuzzyGraph {
  std::vector<int> head;
  std::vector<int> tail;
  std::vector<double> weight;
};

/// Per-point smooth kNN bandwidths and the probabilistic union of the
/// directed memberships.
FuzzyGraph fuzzy_simplicial_set(const KnnGraph& knn);

/// Neighbourhood-preserving layout of the rows of X. Identical inputs and
/// seed give bit-identical output. Exact duplicate rows share coordinates.
LatentEmbedding embed(const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const EmbedParams& params);

/// Mean Jaccard overlap of k-neighbourhoods computed in two spaces.
double neighborhood_jaccard(const Eigen::Ref<const Eigen::MatrixXd>& A,
                            const Eigen::Ref<const Eigen::MatrixXd>& B, int k);

}  // namespace conmap

#endif  // CONMAP_EMBEDDER_HPP_
