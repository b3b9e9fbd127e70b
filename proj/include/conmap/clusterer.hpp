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
#ifndef CONMAP_CLUSTERER_HPP_
#define CONMAP_CLUSTERER_HPP_

#include <string>
#include <vector>

#include "conmap/common.hpp"

namespace conmap {

struct ClusterParams {
  int min_cluster_size = 20;
  int min_samples = 10;

  void validate() const;
};

/// Core distances (distance to the min_samples-th neighbour, self excluded)
/// and the mutual reachability metric built on them.
class MutualReachability {
 public:
  MutualReachability(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                     int min_samples);

  double operator()(Eigen::Index i, Eigen::Index j) const;
  double euclidean(Eigen::Index i, Eigen::Index j) const;
  const Eigen::VectorXd& core() const { return core_; }
  Eigen::Index size() const { return points_.cols(); }

 private:
  Eigen::MatrixXd points_;  // d x N
  Eigen::VectorXd core_;
};

struct WeightedEdge {
  int a = 0;
  int b = 0;
  double w = 0.0;
};

/// Prim's algorithm over the complete mutual reachability graph. Ties pick
/// the lowest vertex index. Edges are returned in insertion order.
std::vector<WeightedEdge> minimum_spanning_tree(const MutualReachability& mr);

/// One cluster of the condensed tree. Root has parent -1 and birth 0.
struct CondensedCluster {
  int parent = -1;
  double lambda_birth = 0.0;
  double stability = 0.0;
  std::vector<int> children;
  std::vector<int> points;  // every point under this cluster
};

/// Condensed hierarchy from MST edges. Edges of equal weight merge in a
/// single multiway step, so the result does not depend on their order.
std::vector<CondensedCluster> condensed_tree(int n_points,
                                             std::vector<WeightedEdge> mst,
                                             int min_cluster_size);

/// Excess-of-mass selection. The root is eligible only when it has no
/// child clusters. Returns indices into the tree.
std::vector<int> select_clusters(const std::vector<CondensedCluster>& tree);

struct ClusterLabels {
  Eigen::VectorXi labels;            // -1 for noise
  std::vector<double> stabilities;   // per label
  std::string warning;

  int n_clusters() const { return int(stabilities.size()); }
};

/// Labels are numbered by the smallest member index.
ClusterLabels labels_from_selection(int n_points,
                                    const std::vector<CondensedCluster>& tree,
                                    const std::vector<int>& selected);

ClusterLabels cluster(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                      const ClusterParams& params);

}  // namespace conmap

#endif  // CONMAP_CLUSTERER_HPP_
