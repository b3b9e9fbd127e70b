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
#include "conmap/clusterer.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "conmap/oracle.hpp"

namespace conmap {

void ClusterParams::validate() const {
  if (min_cluster_size < 1 || min_samples < 1)
    throw InvalidArgument("cluster sizes must be positive");
  if (min_samples > min_cluster_size)
    throw InvalidArgument("min_samples must not exceed min_cluster_size");
}

MutualReachability::MutualReachability(
    const Eigen::Ref<const Eigen::MatrixXd>& coords, int min_samples)
    : points_(coords.transpose()), core_(coords.rows()) {
  const Eigen::Index n = coords.rows();
  if (min_samples < 1 || min_samples >= n)
    throw InvalidArgument("min_samples must satisfy 1 <= min_samples < N");
  std::vector<double> row(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index r = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row[r++] = euclidean(i, j);
    std::nth_element(row.begin(), row.begin() + (min_samples - 1), row.end());
    core_(i) = row[min_samples - 1];
  }
}

double MutualReachability::euclidean(Eigen::Index i, Eigen::Index j) const {
  return (points_.col(i) - points_.col(j)).norm();
}

double MutualReachability::operator()(Eigen::Index i, Eigen::Index j) const {
  if (i == j) return 0.0;
  return std::max({core_(i), core_(j), euclidean(i, j)});
}

std::vector<WeightedEdge> minimum_spanning_tree(const MutualReachability& mr) {
  const int n = int(mr.size());
  std::vector<WeightedEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> from(n, -1);
  int current = 0;
  in_tree[0] = 1;
  for (int added = 1; added < n; ++added) {
    int next = -1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double d = mr(current, v);
      if (d < best[v]) {
        best[v] = d;
        from[v] = current;
      }
      if (next < 0 || best[v] < best[next]) next = v;
    }
    in_tree[next] = 1;
    edges.push_back({std::min(from[next], next), std::max(from[next], next),
                     best[next]});
    current = next;
  }
  return edges;
}

namespace {

double to_lambda(double d) { return 1.0 / std::max(d, 1e-10); }

// Multiway single-linkage hierarchy. Leaves 0..n-1 are points.
struct Dendrogram {
  std::vector<std::vector<int>> children;
  std::vector<double> distance;
  std::vector<int> size;
};

Dendrogram single_linkage(int n, std::vector<WeightedEdge> mst) {
  std::stable_sort(mst.begin(), mst.end(),
                   [](const WeightedEdge& x, const WeightedEdge& y) {
                     if (x.w != y.w) return x.w < y.w;
                     if (x.a != y.a) return x.a < y.a;
                     return x.b < y.b;
                   });
  Dendrogram dg;
  dg.children.resize(n);
  dg.distance.assign(n, 0.0);
  dg.size.assign(n, 1);
  UnionFind uf(n);
  std::vector<int> node_of(n);
  std::iota(node_of.begin(), node_of.end(), 0);

  for (std::size_t s = 0; s < mst.size();) {
    std::size_t e = s;
    while (e < mst.size() && mst[e].w == mst[s].w) ++e;
    // Old roots touched by this weight level.
    std::vector<int> touched;
    for (std::size_t t = s; t < e; ++t) {
      touched.push_back(uf.find(mst[t].a));
      touched.push_back(uf.find(mst[t].b));
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::map<int, int> old_node;
    for (int r : touched) old_node[r] = node_of[r];
    for (std::size_t t = s; t < e; ++t) uf.unite(mst[t].a, mst[t].b);
    std::map<int, std::vector<int>> groups;
    for (int r : touched) groups[uf.find(r)].push_back(old_node[r]);
    for (auto& [root, kids] : groups) {
      const int id = int(dg.children.size());
      int total = 0;
      for (int k : kids) total += dg.size[k];
      dg.children.push_back(kids);
      dg.distance.push_back(mst[s].w);
      dg.size.push_back(total);
      node_of[root] = id;
    }
    s = e;
  }
  return dg;
}

void collect_points(const Dendrogram& dg, int node, std::vector<int>& out) {
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (dg.children[v].empty())
      out.push_back(v);
    else
      for (int c : dg.children[v]) stack.push_back(c);
  }
}

}  // namespace

std::vector<CondensedCluster> condensed_tree(int n_points,
                                             std::vector<WeightedEdge> mst,
                                             int min_cluster_size) {
  const Dendrogram dg = single_linkage(n_points, std::move(mst));
  std::vector<CondensedCluster> tree;
  if (n_points == 0) return tree;
  tree.push_back({});
  const int root_node = int(dg.children.size()) - 1;
  collect_points(dg, root_node, tree[0].points);
  std::sort(tree[0].points.begin(), tree[0].points.end());

  // Walk the dendrogram while tracking which condensed cluster owns each
  // node. Points fall out at the lambda of the split that removes them.
  struct Item {
    int node;
    int cluster;
  };
  std::vector<Item> stack{{root_node, 0}};
  while (!stack.empty()) {
    const auto [node, cl] = stack.back();
    stack.pop_back();
    if (dg.children[node].empty()) {
      continue;
    }
    const double lam = to_lambda(dg.distance[node]);
    std::vector<int> big, small;
    for (int c : dg.children[node])
      (dg.size[c] >= min_cluster_size ? big : small).push_back(c);
    auto shed = [&](int c) {
      std::vector<int> pts;
      collect_points(dg, c, pts);
      tree[cl].stability +=
          double(pts.size()) * (lam - tree[cl].lambda_birth);
    };
    for (int c : small) shed(c);
    if (big.size() == 1) {
      stack.push_back({big[0], cl});
    } else if (big.size() >= 2) {
      for (int c : big) {
        tree[cl].stability += double(dg.size[c]) * (lam - tree[cl].lambda_birth);
        CondensedCluster child;
        child.parent = cl;
        child.lambda_birth = lam;
        collect_points(dg, c, child.points);
        std::sort(child.points.begin(), child.points.end());
        const int id = int(tree.size());
        tree.push_back(std::move(child));
        tree[cl].children.push_back(id);
        stack.push_back({c, id});
      }
    }
  }
  // Children in order of their smallest point, for reproducible output.
  for (auto& c : tree)
    std::sort(c.children.begin(), c.children.end(), [&](int x, int y) {
      return tree[x].points.front() < tree[y].points.front();
    });
  return tree;
}

std::vector<int> select_clusters(const std::vector<CondensedCluster>& tree) {
  if (tree.empty()) return {};
  if (tree[0].children.empty()) return {0};
  const int m = int(tree.size());
  std::vector<double> best(m, 0.0);
  std::vector<char> chosen(m, 0);
  // Children always have larger indices than their parent.
  for (int c = m - 1; c >= 1; --c) {
    double child_sum = 0.0;
    for (int k : tree[c].children) child_sum += best[k];
    if (tree[c].children.empty() || tree[c].stability >= child_sum) {
      best[c] = tree[c].stability;
      chosen[c] = 1;
    } else {
      best[c] = child_sum;
    }
  }
  std::vector<int> selected;
  std::vector<int> stack(tree[0].children.rbegin(), tree[0].children.rend());
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    if (chosen[c]) {
      selected.push_back(c);
      continue;
    }
    for (auto it = tree[c].children.rbegin(); it != tree[c].children.rend();
         ++it)
      stack.push_back(*it);
  }
  return selected;
}

ClusterLabels labels_from_selection(int n_points,
                                    const std::vector<CondensedCluster>& tree,
                                    const std::vector<int>& selected) {
  std::vector<int> order(selected);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return tree[x].points.front() < tree[y].points.front();
  });
  ClusterLabels out;
  out.labels = Eigen::VectorXi::Constant(n_points, -1);
  for (std::size_t l = 0; l < order.size(); ++l) {
    for (int p : tree[order[l]].points) out.labels(p) = int(l);
    out.stabilities.push_back(tree[order[l]].stability);
  }
  return out;
}

ClusterLabels cluster(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                      const ClusterParams& params) {
  params.validate();
  const int n = int(coords.rows());
  if (n < params.min_cluster_size || n <= params.min_samples) {
    ClusterLabels out;
    out.labels = Eigen::VectorXi::Constant(n, -1);
    out.warning = "fewer points than min_cluster_size; all labelled noise";
    return out;
  }
  const MutualReachability mr(coords, params.min_samples);
  const auto tree =
      condensed_tree(n, minimum_spanning_tree(mr), params.min_cluster_size);
  return labels_from_selection(n, tree, select_clusters(tree));
}

}  // namespace conmap
