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
#include "conmap/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <tuple>

#include "conmap/textio.hpp"

namespace conmap {

UnionFind::UnionFind(int n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

std::vector<int> component_labels(UnionFind& uf, int n) {
  std::vector<int> root_label(n, -1), labels(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  return labels;
}

namespace detail {

std::vector<std::pair<int, int>> radius_pairs(const std::vector<JointConfig>& pts,
                                              double radius) {
  std::vector<std::tuple<double, int, int>> cand;
  const int n = int(pts.size());
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (pts[i] - pts[j]).squaredNorm();
      if (d2 <= r2) cand.emplace_back(d2, i, j);
    }
  std::sort(cand.begin(), cand.end());
  std::vector<std::pair<int, int>> out;
  out.reserve(cand.size());
  for (const auto& [d2, i, j] : cand) out.emplace_back(i, j);
  return out;
}

}  // namespace detail

OracleGraph build_oracle(const SystemSpec& sys, int n_samples, double radius,
                         const std::vector<Obstacle>& obstacles,
                         std::uint64_t seed, const OracleOptions& opts) {
  if (n_samples < 2) throw InvalidArgument("oracle needs at least 2 samples");
  sys.validate();
  Rng rng(seed);
  std::vector<JointConfig> samples;
  const long long budget =
      (long long)n_samples * std::max(1, opts.attempts_per_sample);
  for (long long a = 0; a < budget && int(samples.size()) < n_samples; ++a) {
    JointConfig q = sample_uniform(sys, rng);
    if (!sys.constraint.empty()) {
      ProjectionResult p = project(sys, q);
      if (!p.ok()) continue;
      q = std::move(p.q);
    }
    if (collision_free(sys, obstacles, q, opts.clearance))
      samples.push_back(std::move(q));
  }
  if (samples.size() < 2)
    throw OracleError("oracle found fewer than 2 usable samples");

  auto valid = [&](const JointConfig& a, const JointConfig& b) {
    return local_path_valid(sys, obstacles, a, b, opts.resolution,
                            opts.max_drift, opts.clearance);
  };
  OracleGraph g = build_point_oracle(std::move(samples), radius, valid);
  g.system = sys;
  g.obstacles = obstacles;
  g.options = opts;
  return g;
}

std::optional<int> attach(const OracleGraph& g,
                          const Eigen::Ref<const Eigen::VectorXd>& q) {
  std::vector<std::pair<double, int>> cand;
  const double r2 = g.radius * g.radius;
  for (int i = 0; i < int(g.samples.size()); ++i) {
    const double d2 = (g.samples[i] - q).squaredNorm();
    if (d2 <= r2) cand.emplace_back(d2, i);
  }
  std::sort(cand.begin(), cand.end());
  for (const auto& [d2, i] : cand) {
    if (d2 == 0.0) return i;
    if (local_path_valid(g.system, g.obstacles, q, g.samples[i],
                         g.options.resolution, g.options.max_drift,
                         g.options.clearance))
      return i;
  }
  return std::nullopt;
}

int component_of(const OracleGraph& g,
                 const Eigen::Ref<const Eigen::VectorXd>& q) {
  const auto idx = attach(g, q);
  if (!idx) throw OracleError("query configuration cannot be attached");
  return g.component[*idx];
}

bool same_component(const OracleGraph& g,
                    const Eigen::Ref<const Eigen::VectorXd>& q_a,
                    const Eigen::Ref<const Eigen::VectorXd>& q_b) {
  return component_of(g, q_a) == component_of(g, q_b);
}

std::vector<int> roadmap_path(const OracleGraph& g, int from, int to) {
  const int n = int(g.samples.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : g.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<int> prev(n, -2);
  std::queue<int> open;
  open.push(from);
  prev[from] = -1;
  while (!open.empty()) {
    const int u = open.front();
    open.pop();
    if (u == to) break;
    for (int v : adj[u])
      if (prev[v] == -2) {
        prev[v] = u;
        open.push(v);
      }
  }
  if (prev[to] == -2) return {};
  std::vector<int> path;
  for (int v = to; v >= 0; v = prev[v]) path.push_back(v);
  return {path.rbegin(), path.rend()};
}

std::string oracle_hash(const OracleGraph& g) {
  Fnv1a h;
  h.update(g.radius);
  for (const auto& o : g.obstacles) {
    h.update(o.center);
    h.update(o.radius);
  }
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    h.update(g.samples[i]);
    h.update(std::uint64_t(g.component[i]));
  }
  for (const auto& [a, b] : g.edges) {
    h.update(std::uint64_t(a));
    h.update(std::uint64_t(b));
  }
  return to_hex(h.digest());
}

void write_oracle(std::ostream& os, const OracleGraph& g) {
  TextWriter w(os);
  write_header(w, {"oracle", oracle_hash(g), std::int64_t(g.samples.size())});
  const auto& o = g.options;
  w.field("meta").field(g.radius).field(g.n_components)
      .field(std::int64_t(g.edges.size())).field(std::int64_t(g.obstacles.size()))
      .field(o.resolution).field(o.max_drift).field(o.clearance)
      .field(o.attempts_per_sample);
  w.end_line();
  write_system(w, g.system);
  for (const auto& ob : g.obstacles) {
    w.field("o").field(ob.center.x()).field(ob.center.y()).field(ob.radius);
    w.end_line();
  }
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    w.field("s").field(g.component[i]).fields(g.samples[i]);
    w.end_line();
  }
  for (const auto& [a, b] : g.edges) {
    w.field("e").field(a).field(b);
    w.end_line();
  }
}

OracleGraph read_oracle(std::istream& is) {
  TextReader r(is);
  const ContainerHeader h = read_header(r, "oracle");
  OracleGraph g;
  r.next("meta");
  g.radius = r.real();
  g.n_components = int(r.integer());
  const auto n_edges = r.integer();
  const auto n_obstacles = r.integer();
  g.options.resolution = r.real();
  g.options.max_drift = r.real();
  g.options.clearance = r.real();
  g.options.attempts_per_sample = int(r.integer());
  r.done();
  if (h.count < 0 || n_edges < 0 || n_obstacles < 0) r.fail("negative count");
  g.system = read_system(r);
  for (std::int64_t k = 0; k < n_obstacles; ++k) {
    r.next("o");
    Obstacle ob;
    ob.center.x() = r.real();
    ob.center.y() = r.real();
    ob.radius = r.real();
    r.done();
    g.obstacles.push_back(ob);
  }
  const Eigen::Index n = g.system.dof();
  for (std::int64_t k = 0; k < h.count; ++k) {
    r.next("s");
    const auto c = r.integer();
    if (c < 0 || c >= g.n_components) r.fail("component label out of range");
    g.component.push_back(int(c));
    g.samples.push_back(r.reals(n));
    r.done();
  }
  for (std::int64_t k = 0; k < n_edges; ++k) {
    r.next("e");
    const auto a = r.integer(), b = r.integer();
    r.done();
    if (a < 0 || b < 0 || a >= h.count || b >= h.count) r.fail("edge out of range");
    g.edges.emplace_back(int(a), int(b));
  }
  if (!r.at_end()) {
    r.next();
    r.fail("trailing content after the last record");
  }
  if (oracle_hash(g) != h.hash) throw ParseError(1, 4, "integrity hash mismatch");
  return g;
}

void save_oracle(const OracleGraph& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RuntimeFailure("cannot write " + path);
  write_oracle(os, g);
  if (!os) throw RuntimeFailure("write failed: " + path);
}

OracleGraph load_oracle(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw RuntimeFailure("cannot read " + path);
  return read_oracle(is);
}

}  // namespace conmap
