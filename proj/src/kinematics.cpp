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
#include "conmap/kinematics.hpp"

#include <algorithm>

namespace conmap {

double ChainSpec::reach() const {
  double total = 0.0;
  for (double l : link_lengths) total += l;
  return total;
}

void ChainSpec::validate() const {
  if (link_lengths.empty()) throw InvalidArgument("chain has no links");
  if (joint_limits.size() != link_lengths.size())
    throw InvalidArgument("chain has " + std::to_string(link_lengths.size()) +
                          " links but " + std::to_string(joint_limits.size()) +
                          " joint limits");
  for (double l : link_lengths)
    if (!(l > 0.0) || !std::isfinite(l))
      throw InvalidArgument("link lengths must be positive and finite");
  for (const auto& lim : joint_limits)
    if (!(lim.lo < lim.hi)) throw InvalidArgument("joint limit needs lo < hi");
}

ChainSpec ChainSpec::uniform(std::vector<double> lengths, JointLimit limit,
                             Pose2d base) {
  ChainSpec chain;
  chain.joint_limits.assign(lengths.size(), limit);
  chain.link_lengths = std::move(lengths);
  chain.base_pose = base;
  chain.validate();
  return chain;
}

Eigen::MatrixXd nullspace_basis(const Eigen::Ref<const Eigen::MatrixXd>& J) {
  const Eigen::Index n = J.cols();
  if (J.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  if (sigma_max > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * sigma_max) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Eigen::VectorXd task_error(const ChainSpec& chain, const Pose2d& target,
                           TaskMask mask,
                           const Eigen::Ref<const Eigen::VectorXd>& q) {
  const Pose2d pose = forward_kinematics(chain, q);
  Eigen::VectorXd e(mask.count());
  Eigen::Index r = 0;
  if (mask.x) e(r++) = target.x - pose.x;
  if (mask.y) e(r++) = target.y - pose.y;
  if (mask.theta) e(r++) = wrap_angle(target.theta - pose.theta);
  return e;
}

namespace {

Eigen::MatrixXd masked_rows(const Eigen::MatrixXd& J, TaskMask mask) {
  Eigen::MatrixXd out(mask.count(), J.cols());
  Eigen::Index r = 0;
  if (mask.x) out.row(r++) = J.row(0);
  if (mask.y) out.row(r++) = J.row(1);
  if (mask.theta) out.row(r++) = J.row(2);
  return out;
}

void clamp_to_limits(const ChainSpec& chain, Eigen::VectorXd& q) {
  for (Eigen::Index k = 0; k < q.size(); ++k)
    q(k) = std::clamp(q(k), chain.joint_limits[k].lo, chain.joint_limits[k].hi);
}

}  // namespace

bool within_limits(const ChainSpec& chain,
                   const Eigen::Ref<const Eigen::VectorXd>& q) {
  detail::check_dims(chain, q.size());
  for (Eigen::Index k = 0; k < q.size(); ++k)
    if (q(k) < chain.joint_limits[k].lo || q(k) > chain.joint_limits[k].hi)
      return false;
  return true;
}

bool refine_ik(const ChainSpec& chain, const Pose2d& target, TaskMask mask,
               Eigen::VectorXd& q, const IkOptions& opts) {
  const double lambda2 = opts.damping * opts.damping;
  const Eigen::Index m = mask.count();
  for (int it = 0; it <= opts.max_iters; ++it) {
    const Eigen::VectorXd e = task_error(chain, target, mask, q);
    if (e.norm() <= opts.tol) return within_limits(chain, q);
    if (it == opts.max_iters) break;
    const Eigen::MatrixXd J = masked_rows(jacobian(chain, q), mask);
    const Eigen::MatrixXd JJt =
        J * J.transpose() + lambda2 * Eigen::MatrixXd::Identity(m, m);
    q += J.transpose() * JJt.ldlt().solve(e);
    clamp_to_limits(chain, q);
  }
  return false;
}

std::vector<JointConfig> solve_ik(const ChainSpec& chain, const Pose2d& target,
                                  TaskMask mask, const IkOptions& opts) {
  chain.validate();
  std::vector<JointConfig> solutions;
  if (mask.count() == 0) return solutions;
  // Cheap reachability screen on the tip position.
  {
    const double dist =
        (target.translation() - chain.base_pose.translation()).norm();
    double longest = 0.0;
    for (double l : chain.link_lengths) longest = std::max(longest, l);
    const double inner = std::max(0.0, 2.0 * longest - chain.reach());
    if ((mask.x || mask.y) &&
        (dist > chain.reach() + opts.tol || dist < inner - opts.tol))
      return solutions;
  }
  Rng rng(opts.seed);
  const Eigen::Index n = Eigen::Index(chain.dof());
  Eigen::VectorXd q(n);
  for (int restart = 0; restart < opts.n_restarts; ++restart) {
    for (Eigen::Index k = 0; k < n; ++k)
      q(k) = rng.uniform(chain.joint_limits[k].lo, chain.joint_limits[k].hi);
    if (!refine_ik(chain, target, mask, q, opts)) continue;
    const bool duplicate =
        std::any_of(solutions.begin(), solutions.end(), [&](const auto& s) {
          return (s - q).norm() < opts.dedupe_distance;
        });
    if (duplicate) continue;
    solutions.push_back(q);
    if (int(solutions.size()) >= opts.max_solutions) break;
  }
  return solutions;
}

std::vector<JointConfig> solve_ik(const ChainSpec& chain, const Pose2d& target,
                                  TaskMask mask, int n_restarts, double tol,
                                  std::uint64_t seed) {
  IkOptions opts;
  opts.n_restarts = n_restarts;
  opts.tol = tol;
  opts.seed = seed;
  return solve_ik(chain, target, mask, opts);
}

}  // namespace conmap
