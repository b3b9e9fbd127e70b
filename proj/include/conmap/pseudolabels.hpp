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
#ifndef CONMAP_PSEUDOLABELS_HPP_
#define CONMAP_PSEUDOLABELS_HPP_

#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "conmap/clusterer.hpp"
#include "conmap/embedder.hpp"

namespace conmap {

struct ScaleSchedule {
  std::vector<std::pair<EmbedParams, ClusterParams>> scales;

  int size() const { return int(scales.size()); }
  /// Non-empty and ordered by non-decreasing n_neighbors.
  void validate() const;

  /// Four scales, (3, 0.1) (10, 0.1) (25, 0.2) (50, 0.2), with embedding
  /// seeds derived from `seed`.
  static ScaleSchedule standard(std::uint64_t seed = 0);
  /// Arbitrary neighbour counts at one min_dist.
  static ScaleSchedule from_neighbors(const std::vector<int>& n_neighbors,
                                      double min_dist, const ClusterParams& cp,
                                      std::uint64_t seed = 0);
};

struct ScaleDiagnostics {
  int n_clusters = 0;
  double noise_fraction = 0.0;
};

struct PseudoLabelMatrix {
  Eigen::MatrixXi labels;  // N x K, noise = -1
  ScaleSchedule schedule;
  std::string dataset_hash;
  std::vector<ScaleDiagnostics> diagnostics;

  Eigen::Index size() const { return labels.rows(); }
  int n_scales() const { return int(labels.cols()); }
};

/// Column k is cluster(embed(X, scale k)). Errors carry the scale index.
/// The optional callback receives each scale's latent coordinates.
PseudoLabelMatrix build_pseudolabels(
    const Eigen::Ref<const Eigen::MatrixXd>& X, const ScaleSchedule& schedule,
    std::string dataset_hash = {},
    const std::function<void(int, const LatentEmbedding&)>& on_embed = {});

/// Text container of kind "labels"; the header hash is the dataset hash.
void write_labels(std::ostream& os, const PseudoLabelMatrix& m);
PseudoLabelMatrix read_labels(std::istream& is);
void save_labels(const PseudoLabelMatrix& m, const std::string& path);
PseudoLabelMatrix load_labels(const std::string& path);

/// Same-cluster members of i at scale k, i excluded. Empty for noise.
std::vector<int> positives(const PseudoLabelMatrix& m, Eigen::Index i, int k);

}  // namespace conmap

#endif  // CONMAP_PSEUDOLABELS_HPP_
