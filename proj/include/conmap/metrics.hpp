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
#ifndef CONMAP_METRICS_HPP_
#define CONMAP_METRICS_HPP_

#include <vector>

#include "conmap/common.hpp"

namespace conmap {

/// Adjusted Rand index between two labelings of the same points. Every
/// label value, -1 included, is treated as its own group.
double adjusted_rand_index(const Eigen::Ref<const Eigen::VectorXi>& a,
                           const Eigen::Ref<const Eigen::VectorXi>& b);

/// Area under the ROC curve of `score` against boolean `positive`, with
/// tied scores counted as one half. Throws when either class is empty.
double auroc(const std::vector<double>& score, const std::vector<bool>& positive);

}  // namespace conmap

#endif  // CONMAP_METRICS_HPP_
