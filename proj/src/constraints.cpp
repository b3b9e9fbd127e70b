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
#include "conmap/constraints.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace conmap {

int ConstraintSpec::residual_dim() const {
  int dim = 3 * int(grasp_pairs.size()) + int(fixed_orientation.size());
  for (const auto& t : pose_targets) dim += t.mask.count();
  return dim;
}

int SystemSpec::dof() const {
  int n = 0;
  for (const auto& c : chains) n += int(c.dof());
  return n;
}

int SystemSpec::offset(int c) const {
  int off = 0;
  for (int k = 0; k < c; ++k) off += int(chains[k].dof());
  return off;
}

Eigen::VectorXd SystemSpec::lower_limits() const {
  Eigen::VectorXd lo(dof());
  Eigen::Index r = 0;
  for (const auto& c : chains)
    for (const auto& lim : c.joint_limits) lo(r++) = lim.lo;
  return lo;
}

Eigen::VectorXd SystemSpec::upper_limits() const {
  Eigen::VectorXd hi(dof());
  Eigen::Index r = 0;
  for (const auto& c : chains)
    for (const auto& lim : c.joint_limits) hi(r++) = lim.hi;
  return hi;
}

void SystemSpec::validate() const {
  if (chains.empty()) throw InvalidArgument("system has no chains");
  for (const auto& c : chains) c.validate();
  const int n = int(chains.size());
  auto check_index = [n](int c, const char* what) {
    if (c < 0 || c >= n)
      throw InvalidArgument(std::string(what) + " refers to chain " +
                            std::to_string(c) + " of " + std::to_string(n));
  };
  std::set<std::pair<int, int>> seen;
  for (const auto& g : constraint.grasp_pairs) {
    check_index(g.i, "grasp pair");
    check_index(g.j, "grasp pair");
    if (g.i == g.j) throw InvalidArgument("grasp pair needs two chains");
    if (!seen.insert({std::min(g.i, g.j), std::max(g.i, g.j)}).second)
      throw InvalidArgument("duplicate grasp pair");
  }
  for (const auto& f : constraint.fixed_orientation)
    check_index(f.chain, "fixed orientation");
  for (const auto& t : constraint.pose_targets)
    check_index(t.chain, "pose target");
  if (!(constraint.tol > 0.0)) throw InvalidArgument("tolerance must be > 0");
}

std::uint64_t SystemSpec::hash() const {
  Fnv1a h;
  h.update(std::uint64_t(chains.size()));
  for (const auto& c : chains) {
    h.update(std::uint64_t(c.dof()));
    for (double l : c.link_lengths) h.update(l);
    for (const auto& lim : c.joint_limits) {
      h.update(lim.lo);
      h.update(lim.hi);
    }
    h.update(c.base_pose.x);
    h.update(c.base_pose.y);
    h.update(c.base_pose.theta);
  }
  h.update(std::uint64_t(constraint.grasp_pairs.size()));
  for (const auto& g : constraint.grasp_pairs) {
    h.update(std::uint64_t(g.i));
    h.update(std::uint64_t(g.j));
    h.update(g.desired.x);
    h.update(g.desired.y);
    h.update(g.desired.theta);
  }
  h.update(std::uint64_t(constraint.fixed_orientation.size()));
  for (const auto& f : constraint.fixed_orientation) {
    h.update(std::uint64_t(f.chain));
    h.update(f.theta);
  }
  h.update(std::uint64_t(constraint.pose_targets.size()));
  for (const auto& t : constraint.pose_targets) {
    h.update(std::uint64_t(t.chain));
    h.update(t.pose.x);
    h.update(t.pose.y);
    h.update(t.pose.theta);
    h.update(std::uint64_t(t.mask.count() | (t.mask.x << 2) | (t.mask.y << 3) |
                           (t.mask.theta << 4)));
  }
  h.update(constraint.tol);
  return h.digest();
}

SystemSpec SystemSpec::single(ChainSpec chain) {
  SystemSpec sys;
  sys.chains.push_back(std::move(chain));
  sys.validate();
  return sys;
}

ConstraintResidual residual(const SystemSpec& sys,
                            const Eigen::Ref<const Eigen::VectorXd>& q) {
  if (q.size() != sys.dof())
    throw InvalidArgument("configuration has " + std::to_string(q.size()) +
                          " entries, system has " + std::to_string(sys.dof()) +
                          " joints");
  const auto& cs = sys.constraint;
  const int rows = cs.residual_dim();
  ConstraintResidual out;
  out.values.setZero(rows);
  out.jacobian.setZero(rows, sys.dof());
  if (rows == 0) return out;

  const int n_chains = int(sys.chains.size());
  std::vector<Pose2d> tips(n_chains);
  std::vector<Eigen::Matrix3Xd> jacs(n_chains);
  std::vector<bool> needed(n_chains, false);
  for (const auto& g : cs.grasp_pairs) needed[g.i] = needed[g.j] = true;
  for (const auto& f : cs.fixed_orientation) needed[f.chain] = true;
  for (const auto& t : cs.pose_targets) needed[t.chain] = true;
  for (int c = 0; c < n_chains; ++c) {
    if (!needed[c]) continue;
    const auto qc = chain_segment(sys, q, c);
    tips[c] = forward_kinematics(sys.chains[c], qc);
    jacs[c] = jacobian(sys.chains[c], qc);
  }

  Eigen::Index row = 0;
  for (const auto& g : cs.grasp_pairs) {
    const Pose2d& Ti = tips[g.i];
    const Pose2d& Tj = tips[g.j];
    const Pose2d rel = relative(Ti, Tj);
    out.values(row + 0) = rel.x - g.desired.x;
    out.values(row + 1) = rel.y - g.desired.y;
    out.values(row + 2) = wrap_angle(rel.theta - g.desired.theta);

    const double c = std::cos(Ti.theta), s = std::sin(Ti.theta);
    Eigen::Matrix2d Rt;
    Rt << c, s, -s, c;
    const Eigen::Vector2d dp = Tj.translation() - Ti.translation();
    const Eigen::Vector2d Sdp(-dp.y(), dp.x());
    const int oi = sys.offset(g.i), oj = sys.offset(g.j);
    const auto& Ji = jacs[g.i];
    const auto& Jj = jacs[g.j];
    out.jacobian.block(row, oi, 2, Ji.cols()) +=
        -Rt * (Ji.topRows<2>() + Sdp * Ji.row(2));
    out.jacobian.block(row, oj, 2, Jj.cols()) += Rt * Jj.topRows<2>();
    out.jacobian.block(row + 2, oi, 1, Ji.cols()) -= Ji.row(2);
    out.jacobian.block(row + 2, oj, 1, Jj.cols()) += Jj.row(2);
    row += 3;
  }
  for (const auto& f : cs.fixed_orientation) {
    out.values(row) = wrap_angle(tips[f.chain].theta - f.theta);
    const auto& J = jacs[f.chain];
    out.jacobian.block(row, sys.offset(f.chain), 1, J.cols()) = J.row(2);
    ++row;
  }
  for (const auto& t : cs.pose_targets) {
    const auto& J = jacs[t.chain];
    const int oc = sys.offset(t.chain);
    const Pose2d& T = tips[t.chain];
    if (t.mask.x) {
      out.values(row) = T.x - t.pose.x;
      out.jacobian.block(row++, oc, 1, J.cols()) = J.row(0);
    }
    if (t.mask.y) {
      out.values(row) = T.y - t.pose.y;
      out.jacobian.block(row++, oc, 1, J.cols()) = J.row(1);
    }
    if (t.mask.theta) {
      out.values(row) = wrap_angle(T.theta - t.pose.theta);
      out.jacobian.block(row++, oc, 1, J.cols()) = J.row(2);
    }
  }
  return out;
}

double residual_norm(const SystemSpec& sys,
                     const Eigen::Ref<const Eigen::VectorXd>& q) {
  return residual(sys, q).values.norm();
}

ProjectionResult project(const SystemSpec& sys,
                         const Eigen::Ref<const Eigen::VectorXd>& q,
                         const ProjectionOptions& opts) {
  const double tol = sys.constraint.tol;
  const Eigen::VectorXd lo = sys.lower_limits();
  const Eigen::VectorXd hi = sys.upper_limits();
  ProjectionResult result;
  result.q = q;
  for (int it = 0;; ++it) {
    const ConstraintResidual r = residual(sys, result.q);
    result.residual = r.values.norm();
    result.iterations = it;
    if (!std::isfinite(result.residual) || result.residual > 1e6) {
      result.status = ProjectionStatus::kDiverged;
      return result;
    }
    if (result.residual <= tol) {
      const bool inside =
          (result.q.array() >= lo.array()).all() &&
          (result.q.array() <= hi.array()).all();
      result.status =
          inside ? ProjectionStatus::kConverged : ProjectionStatus::kJointLimits;
      return result;
    }
    if (it >= opts.max_iters) {
      result.status = ProjectionStatus::kMaxIterations;
      return result;
    }
    const Eigen::MatrixXd& J = r.jacobian;
    const Eigen::MatrixXd JJt =
        J * J.transpose() +
        opts.damping * Eigen::MatrixXd::Identity(J.rows(), J.rows());
    result.q -= J.transpose() * JJt.ldlt().solve(r.values);
    result.q = result.q.cwiseMax(lo).cwiseMin(hi);
  }
}

bool within_limits(const SystemSpec& sys,
                   const Eigen::Ref<const Eigen::VectorXd>& q) {
  return (q.array() >= sys.lower_limits().array()).all() &&
         (q.array() <= sys.upper_limits().array()).all();
}

JointConfig sample_uniform(const SystemSpec& sys, Rng& rng) {
  const Eigen::VectorXd lo = sys.lower_limits();
  const Eigen::VectorXd hi = sys.upper_limits();
  JointConfig q(lo.size());
  for (Eigen::Index k = 0; k < q.size(); ++k) q(k) = rng.uniform(lo(k), hi(k));
  return q;
}

std::vector<JointConfig> sample_on_manifold(const SystemSpec& sys,
                                            std::uint64_t seed, int n,
                                            int attempts_per_sample) {
  if (n < 1) throw InvalidArgument("sample_on_manifold needs n >= 1");
  sys.validate();
  Rng rng(seed);
  std::vector<JointConfig> out;
  out.reserve(n);
  const long long budget = (long long)n * std::max(1, attempts_per_sample);
  for (long long attempt = 0; attempt < budget && int(out.size()) < n;
       ++attempt) {
    const JointConfig q = sample_uniform(sys, rng);
    if (sys.constraint.empty()) {
      out.push_back(q);
      continue;
    }
    ProjectionResult p = project(sys, q);
    if (p.ok()) out.push_back(std::move(p.q));
  }
  return out;
}

Pose2d object_pose(const SystemSpec& sys,
                   const Eigen::Ref<const Eigen::VectorXd>& q) {
  return forward_kinematics(sys.chains[0], chain_segment(sys, q, 0));
}

std::vector<std::optional<Pose2d>> chain_targets(const SystemSpec& sys,
                                                 const Pose2d& object) {
  std::vector<std::optional<Pose2d>> targets(sys.chains.size());
  targets[0] = object;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : sys.constraint.grasp_pairs) {
      if (targets[g.i] && !targets[g.j]) {
        targets[g.j] = compose(*targets[g.i], g.desired);
        changed = true;
      } else if (targets[g.j] && !targets[g.i]) {
        targets[g.i] = compose(*targets[g.j], inverse(g.desired));
        changed = true;
      }
    }
  }
  return targets;
}

std::vector<JointConfig> solve_system_ik(const SystemSpec& sys,
                                         const Pose2d& object,
                                         const SystemIkOptions& opts) {
  sys.validate();
  const auto targets = chain_targets(sys, object);
  const int n_chains = int(sys.chains.size());
  std::vector<std::vector<JointConfig>> per_chain(n_chains);
  Rng rng(Rng::derive(opts.ik.seed, 0x5157));
  for (int c = 0; c < n_chains; ++c) {
    IkOptions ik = opts.ik;
    ik.seed = Rng::derive(opts.ik.seed, std::uint64_t(c));
    // IK on the pieces must be tighter than the system tolerance.
    ik.tol = std::min(ik.tol, 0.01 * sys.constraint.tol);
    if (targets[c]) {
      const TaskMask mask = c == 0 ? opts.object_mask : TaskMask::full();
      per_chain[c] = solve_ik(sys.chains[c], *targets[c], mask, ik);
    } else {
      Eigen::VectorXd q(sys.chains[c].dof());
      for (Eigen::Index k = 0; k < q.size(); ++k)
        q(k) = rng.uniform(sys.chains[c].joint_limits[k].lo,
                           sys.chains[c].joint_limits[k].hi);
      per_chain[c].push_back(q);
    }
    if (per_chain[c].empty()) return {};
  }

  std::size_t combos = 1;
  for (const auto& s : per_chain) combos *= s.size();
  std::vector<std::size_t> order(combos);
  std::iota(order.begin(), order.end(), std::size_t(0));
  if (combos > std::size_t(opts.max_solutions)) {
    // Deterministic Fisher-Yates; keep the first max_solutions.
    for (std::size_t k = combos - 1; k > 0; --k)
      std::swap(order[k], order[rng.uniform_index(k + 1)]);
    order.resize(opts.max_solutions);
    std::sort(order.begin(), order.end());
  }

  std::vector<JointConfig> out;
  const int n = sys.dof();
  for (std::size_t code : order) {
    JointConfig q(n);
    for (int c = 0; c < n_chains; ++c) {
      const std::size_t pick = code % per_chain[c].size();
      code /= per_chain[c].size();
      q.segment(sys.offset(c), Eigen::Index(sys.chains[c].dof())) =
          per_chain[c][pick];
    }
    ProjectionResult p = project(sys, q);
    if (p.ok()) out.push_back(std::move(p.q));
  }
  return out;
}

}  // namespace conmap
