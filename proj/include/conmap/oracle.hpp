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
#ifndef CONMAP_ORACLE_HPP_
#define CONMAP_ORACLE_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "conmap/planner.hpp"

namespace conmap {

/// Disjoint-set forest with path halving and union by size. Ties in the
/// union keep the smaller root index as representative.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);
  int size(int x) { return size_[find(x)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

/// Canonical component labels 0..C-1 in order of first appearance.
std::vector<int> component_labels(UnionFind& uf, int n);

struct OracleOptions {
  double resolution = 0.02;
  double max_drift = 0.1;
  double clearance = kDefaultClearance;
  int attempts_per_sample = 50;
};

/// r-disk roadmap over dense manifold samples. Edges are validated local
/// paths; pairs already joined through earlier edges are not re-validated,
/// so `edges` is a spanning forest of the validated graph.
struct OracleGraph {
  SystemSpec system;
  std::vector<Obstacle> obstacles;
  OracleOptions options;
  std::vector<JointConfig> samples;
  double radius = 0.0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> component;
  int n_components = 0;
};

class OracleError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

OracleGraph build_oracle(const SystemSpec& sys, int n_samples, double radius,
                         const std::vector<Obstacle>& obstacles,
                         std::uint64_t seed, const OracleOptions& opts = {});

/// Roadmap over caller-supplied points with caller-supplied edge validity.
/// Used for abstract point sets where the local path is a straight line.
template <typename EdgeValid>
OracleGraph build_point_oracle(std::vector<JointConfig> points, double radius,
                               EdgeValid&& valid);

/// Sample index a query attaches to: the nearest sample within the radius
/// whose local path is valid.
/// Text container of kind "oracle". Samples, edges and component labels
/// round-trip exactly, so a graph can be reused across benchmark runs.
void write_oracle(std::ostream& os, const OracleGraph& g);
OracleGraph read_oracle(std::istream& is);
void save_oracle(const OracleGraph& g, const std::string& path);
OracleGraph load_oracle(const std::string& path);
std::string oracle_hash(const OracleGraph& g);

std::optional<int> attach(const OracleGraph& g,
                          const Eigen::Ref<const Eigen::VectorXd>& q);

/// Component label of q; throws OracleError when q cannot be attached.
int component_of(const OracleGraph& g, const Eigen::Ref<const Eigen::VectorXd>& q);

bool same_component(const OracleGraph& g,
                    const Eigen::Ref<const Eigen::VectorXd>& q_a,
                    const Eigen::Ref<const Eigen::VectorXd>& q_b);

/// Sample-index path through roadmap edges, empty when disconnected.
std::vector<int> roadmap_path(const OracleGraph& g, int from, int to);

namespace detail {
std::vector<std::pair<int, int>> radius_pairs(const std::vector<JointConfig>& pts,
                                              double radius);
}  // namespace detail

template <typename EdgeValid>
OracleGraph build_point_oracle(std::vector<JointConfig> points, double radius,
                               EdgeValid&& valid) {
  OracleGraph g;
  g.samples = std::move(points);
  g.radius = radius;
  const int n = int(g.samples.size());
  UnionFind uf(n);
  for (const auto& [i, j] : detail::radius_pairs(g.samples, radius)) {
    if (uf.find(i) == uf.find(j)) continue;
    if (!valid(g.samples[i], g.samples[j])) continue;
    uf.unite(i, j);
    g.edges.emplace_back(i, j);
  }
  g.component = component_labels(uf, n);
  for (int c : g.component) g.n_components = std::max(g.n_components, c + 1);
  return g;
}

}  // namespace conmap

#endif  // CONMAP_ORACLE_HPP_
