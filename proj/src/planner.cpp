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
#include "conmap/planner.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace conmap {

bool local_path_valid(const SystemSpec& sys,
                      const std::vector<Obstacle>& obstacles,
                      const Eigen::Ref<const Eigen::VectorXd>& q_a,
                      const Eigen::Ref<const Eigen::VectorXd>& q_b,
                      double resolution, double max_drift, double clearance) {
  const double dist = (q_b - q_a).norm();
  if (dist < 1e-12) return collision_free(sys, obstacles, q_b, clearance);
  const int steps = std::max(1, int(std::ceil(dist / resolution)));
  const Eigen::VectorXd delta = (q_b - q_a) / double(steps);
  const double step_len = delta.norm();
  const bool constrained = !sys.constraint.empty();
  Eigen::VectorXd prev = q_a;
  for (int s = 1; s <= steps; ++s) {
    const Eigen::VectorXd interp = q_a + double(s) * delta;
    Eigen::VectorXd p;
    if (constrained) {
      ProjectionResult proj = project(sys, prev + delta);
      if (!proj.ok()) return false;
      p = std::move(proj.q);
      if ((p - interp).norm() > max_drift) return false;
      if ((p - prev).norm() > 2.0 * step_len + 1e-12) return false;
    } else {
      p = interp;
    }
    if (!collision_free(sys, obstacles, p, clearance)) return false;
    prev = std::move(p);
  }
  if ((prev - q_b).norm() > step_len) return false;
  return collision_free(sys, obstacles, q_b, clearance);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Tree {
  std::vector<JointConfig> nodes;
  std::vector<int> parent;

  int add(JointConfig q, int p) {
    nodes.push_back(std::move(q));
    parent.push_back(p);
    return int(nodes.size()) - 1;
  }

  int nearest(const Eigen::VectorXd& q) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < int(nodes.size()); ++k) {
      const double d = (nodes[k] - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  }

  /// Root-to-node waypoints.
  std::vector<JointConfig> branch(int idx) const {
    std::vector<JointConfig> out;
    for (int k = idx; k >= 0; k = parent[k]) out.push_back(nodes[k]);
    return {out.rbegin(), out.rend()};
  }
};

class BiRrt {
 public:
  explicit BiRrt(const PlanningProblem& p)
      : p_(p), rng_(p.seed), deadline_(Clock::now()) {
    deadline_ += std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(p.params.time_limit));
  }

  PlanResult run() {
    const auto t0 = Clock::now();
    PlanResult result;
    const auto& prm = p_.params;
    trees_[0].add(p_.q_start, -1);
    trees_[1].add(p_.q_goal, -1);

    if ((p_.q_start - p_.q_goal).norm() < 1e-12) {
      result.success = true;
      result.path = {p_.q_start};
    } else if (try_join(0, 0, 1, 0, result)) {
      // direct edge
    } else {
      int a = 0;
      long long iteration = 0;
      while (!out_of_budget()) {
        ++iteration;
        const JointConfig target = sample_uniform(p_.system, rng_);
        const int added = extend(a, target);
        if (added >= 0) {
          const int b = 1 - a;
          const int near = trees_[b].nearest(trees_[a].nodes[added]);
          if (try_join(a, added, b, near, result)) break;
          if (prm.connect_every > 0 && iteration % prm.connect_every == 0) {
            const int reached = extend(b, trees_[a].nodes[added]);
            if (reached >= 0 && try_join(a, added, b, reached, result)) break;
          }
        }
        a = 1 - a;
      }
    }
    result.nodes_expanded = expanded_;
    result.elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
  }

 private:
  bool out_of_budget() const {
    if (p_.params.max_expansions > 0 && expanded_ >= p_.params.max_expansions)
      return true;
    return Clock::now() >= deadline_;
  }

  bool edge_valid(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return local_path_valid(p_.system, p_.obstacles, a, b, p_.params.resolution,
                            p_.params.step_size, p_.params.clearance);
  }

  /// Repeated constrained steps from the nearest node toward target.
  /// Returns the last added node or -1.
  int extend(int t, const Eigen::VectorXd& target) {
    Tree& tree = trees_[t];
    const double step = p_.params.step_size;
    int idx = tree.nearest(target);
    int last = -1;
    for (int s = 0; s < kMaxExtendSteps && !out_of_budget(); ++s) {
      const Eigen::VectorXd& q = tree.nodes[idx];
      const Eigen::VectorXd d = target - q;
      const double dist = d.norm();
      if (dist < 1e-9) break;
      Eigen::VectorXd next = q + d * std::min(1.0, step / dist);
      if (!p_.system.constraint.empty()) {
        // Projection adds a normal correction that can push the step past
        // step_size; shrink the tangent move until it fits.
        double scale = std::min(1.0, step / dist);
        bool ok = false;
        for (int attempt = 0; attempt < 4; ++attempt) {
          ProjectionResult proj = project(p_.system, q + d * scale);
          if (!proj.ok()) break;
          const double len = (proj.q - q).norm();
          next = std::move(proj.q);
          if (len <= step) {
            ok = true;
            break;
          }
          scale *= 0.9 * step / len;
        }
        if (!ok) break;
      }
      if ((next - q).norm() < 1e-9) break;
      if ((target - next).norm() >= dist) break;
      if (!edge_valid(q, next)) break;
      idx = tree.add(std::move(next), idx);
      ++expanded_;
      last = idx;
      if (dist <= step) break;
    }
    return last;
  }

  bool try_join(int a, int ia, int b, int ib, PlanResult& result) {
    const Eigen::VectorXd& qa = trees_[a].nodes[ia];
    const Eigen::VectorXd& qb = trees_[b].nodes[ib];
    if ((qa - qb).norm() > p_.params.step_size) return false;
    if (!edge_valid(qa, qb)) return false;
    auto left = trees_[a].branch(ia);
    auto right = trees_[b].branch(ib);
    if (a == 1) std::swap(left, right);
    // left runs start -> joint, right runs goal -> joint.
    result.path = std::move(left);
    const bool same_node = (result.path.back() - right.back()).norm() < 1e-12;
    for (auto it = right.rbegin() + (same_node ? 1 : 0); it != right.rend(); ++it)
      result.path.push_back(*it);
    result.success = true;
    return true;
  }

  static constexpr int kMaxExtendSteps = 50;

  const PlanningProblem& p_;
  Rng rng_;
  Clock::time_point deadline_;
  Tree trees_[2];
  long long expanded_ = 0;
};

void check_endpoint(const PlanningProblem& p, const JointConfig& q,
                    const char* which) {
  if (q.size() != p.system.dof())
    throw PlanningError(std::string(which) + " has wrong dimension");
  if (residual_norm(p.system, q) > p.system.constraint.tol)
    throw PlanningError(std::string(which) + " is off the constraint manifold");
  if (!within_limits(p.system, q))
    throw PlanningError(std::string(which) + " violates joint limits");
  if (!collision_free(p.system, p.obstacles, q, p.params.clearance))
    throw PlanningError(std::string(which) + " is in collision");
}

}  // namespace

PlanResult plan(const PlanningProblem& problem) {
  problem.system.validate();
  check_endpoint(problem, problem.q_start, "start");
  check_endpoint(problem, problem.q_goal, "goal");
  return BiRrt(problem).run();
}

bool validate_path(const PlanningProblem& problem,
                   const std::vector<JointConfig>& path) {
  if (path.empty()) return false;
  if ((path.front() - problem.q_start).norm() > 1e-12) return false;
  if ((path.back() - problem.q_goal).norm() > 1e-12) return false;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (residual_norm(problem.system, path[k]) > problem.system.constraint.tol)
      return false;
    if (!collision_free(problem.system, problem.obstacles, path[k],
                        problem.params.clearance))
      return false;
    if (k > 0 && (path[k] - path[k - 1]).norm() > problem.params.step_size + 1e-12)
      return false;
  }
  return true;
}

}  // namespace conmap
