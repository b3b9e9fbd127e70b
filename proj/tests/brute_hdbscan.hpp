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
#ifndef CONMAP_TESTS_BRUTE_HDBSCAN_HPP_
#define CONMAP_TESTS_BRUTE_HDBSCAN_HPP_

// Reference density clustering straight from the definitions: an O(N^2)
// mutual reachability matrix, Kruskal over every pair, and a condensed tree
// built by recomputing graph components at each weight level.

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "conmap/oracle.hpp"

namespace conmap::testing {

inline Eigen::MatrixXd brute_mreach(const Eigen::MatrixXd& X, int min_samples) {
  const int n = int(X.rows());
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D(i, j) = (X.row(i) - X.row(j)).norm();
  Eigen::VectorXd core(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row;
    for (int j = 0; j < n; ++j)
      if (j != i) row.push_back(D(i, j));
    std::sort(row.begin(), row.end());
    core(i) = row[min_samples - 1];
  }
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M(i, j) = i == j ? 0.0 : std::max({core(i), core(j), D(i, j)});
  return M;
}

/// Weights of a minimum spanning tree by exhaustive Kruskal.
inline std::vector<double> kruskal_weights(const Eigen::MatrixXd& M) {
  const int n = int(M.rows());
  std::vector<std::tuple<double, int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(M(i, j), i, j);
  std::sort(edges.begin(), edges.end());
  UnionFind uf(n);
  std::vector<double> out;
  for (const auto& [w, i, j] : edges)
    if (uf.unite(i, j)) out.push_back(w);
  return out;
}

/// Each point mapped to the smallest index sharing its label, noise to -1.
inline std::vector<int> canonical_partition(const Eigen::VectorXi& labels) {
  std::map<int, int> first;
  std::vector<int> out(std::size_t(labels.size()));
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    out[std::size_t(i)] = labels(i) < 0 ? -1 : first.emplace(labels(i), int(i)).first->second;
  return out;
}

/// Partition from the condensed tree with excess-of-mass selection. The
/// root is only eligible when it never splits.
inline std::vector<int> brute_hdbscan(const Eigen::MatrixXd& M, int min_cluster_size) {
  const int n = int(M.rows());
  struct Node {
    int parent;
    double birth;
    double stability = 0.0;
    std::vector<int> members;  // every point ever in the cluster
    std::vector<int> alive;
    std::vector<int> children;
  };
  std::vector<Node> tree;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  tree.push_back({-1, 0.0, 0.0, all, all, {}});

  std::vector<double> levels = kruskal_weights(M);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<int> active{0};
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const double w = *it, lam = 1.0 / w;
    std::vector<int> next;
    for (int c : active) {
      // Components of the cluster in the graph with edges lighter than w.
      const auto& pts = tree[c].alive;
      UnionFind uf(int(pts.size()));
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
          if (M(pts[a], pts[b]) < w) uf.unite(int(a), int(b));
      std::map<int, std::vector<int>> comps;
      for (std::size_t a = 0; a < pts.size(); ++a) comps[uf.find(int(a))].push_back(pts[a]);
      std::vector<std::vector<int>> big;
      for (auto& [root, members] : comps) {
        if (int(members.size()) >= min_cluster_size) big.push_back(members);
        else tree[c].stability += double(members.size()) * (lam - tree[c].birth);
      }
      if (big.size() == 1) {
        tree[c].alive = big[0];
        next.push_back(c);
      } else if (big.size() >= 2) {
        for (auto& members : big) {
          tree[c].stability += double(members.size()) * (lam - tree[c].birth);
          tree[c].children.push_back(int(tree.size()));
          next.push_back(int(tree.size()));
          tree.push_back({c, lam, 0.0, members, members, {}});
        }
      }
    }
    active = std::move(next);
  }

  std::vector<int> selected;
  if (tree[0].children.empty()) {
    selected.push_back(0);
  } else {
    std::vector<double> best(tree.size());
    std::vector<bool> own(tree.size());
    for (int c = int(tree.size()) - 1; c >= 1; --c) {
      double sum = 0.0;
      for (int k : tree[c].children) sum += best[k];
      own[c] = tree[c].children.empty() || tree[c].stability >= sum;
      best[c] = own[c] ? tree[c].stability : sum;
    }
    std::vector<int> stack = tree[0].children;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      if (own[c]) selected.push_back(c);
      else stack.insert(stack.end(), tree[c].children.begin(), tree[c].children.end());
    }
  }
  Eigen::VectorXi labels = Eigen::VectorXi::Constant(n, -1);
  for (std::size_t k = 0; k < selected.size(); ++k)
    for (int p : tree[selected[k]].members) labels(p) = int(k);
  return canonical_partition(labels);
}

}  // namespace conmap::testing

#endif  // CONMAP_TESTS_BRUTE_HDBSCAN_HPP_
