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
#ifndef CONMAP_SVG_HPP_
#define CONMAP_SVG_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "conmap/bench.hpp"

namespace conmap {

/// One scatter plot. Points are coloured by label, noise (-1) in gray.
struct ScatterPanel {
  std::string title;
  Eigen::MatrixXd xy;  // N x 2
  Eigen::VectorXi labels;
};

/// Panels laid out row-major on a rows x cols grid, each in its own
/// <g class="panel"> group with a frame and a title.
std::string scatter_grid_svg(const std::vector<ScatterPanel>& panels, int rows,
                             int cols);

/// Success-rate bars and mean-time bars with +- std whiskers.
std::string bench_svg(const std::vector<StrategySummary>& summary);

/// Fixed oblique projection of 3-D points to the page.
Eigen::MatrixXd oblique_view(const Eigen::Ref<const Eigen::MatrixXd>& X);

}  // namespace conmap

#endif  // CONMAP_SVG_HPP_
