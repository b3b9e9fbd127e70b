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
#include "conmap/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "conmap/textio.hpp"

namespace conmap {

Eigen::MatrixXd ConfigDataset::training_matrix() const {
  const auto idx = training_indices();
  Eigen::MatrixXd X(Eigen::Index(idx.size()), system.dof());
  for (std::size_t r = 0; r < idx.size(); ++r)
    X.row(Eigen::Index(r)) = records[idx[r]].q.transpose();
  return X;
}

std::vector<int> ConfigDataset::training_indices() const {
  std::vector<int> idx;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].collision_free) idx.push_back(int(i));
  return idx;
}

std::string ConfigDataset::hash() const {
  Fnv1a h;
  h.update(system.hash());
  h.update(std::uint64_t(records.size()));
  for (const auto& r : records) {
    h.update(r.q);
    h.update(std::uint64_t(r.pose_id));
    h.update(std::uint64_t(r.collision_free));
    h.update(std::uint64_t(r.nullspace.cols()));
    h.update(r.nullspace);
  }
  return to_hex(h.digest());
}

Eigen::MatrixXd manifold_nullspace(const SystemSpec& sys,
                                   const Eigen::Ref<const Eigen::VectorXd>& q) {
  if (sys.constraint.empty())
    return Eigen::MatrixXd::Identity(sys.dof(), sys.dof());
  return nullspace_basis(residual(sys, q).jacobian);
}

namespace {

double inner_reach(const ChainSpec& c) {
  const double longest =
      *std::max_element(c.link_lengths.begin(), c.link_lengths.end());
  return std::max(0.0, 2.0 * longest - c.reach());
}

bool in_annulus(const ChainSpec& c, const Pose2d& p) {
  const double d = std::hypot(p.x - c.base_pose.x, p.y - c.base_pose.y);
  return d <= c.reach() && d >= inner_reach(c);
}

}  // namespace

bool sample_object_pose(const SystemSpec& sys, Rng& rng, Pose2d& out,
                        int max_draws) {
  const ChainSpec& lead = sys.chains.front();
  const double r_in = inner_reach(lead), r_out = lead.reach();
  for (int draw = 0; draw < max_draws; ++draw) {
    // Area-uniform radius in the annulus.
    const double u = rng.uniform();
    const double r = std::sqrt(r_in * r_in + u * (r_out * r_out - r_in * r_in));
    const double phi = rng.uniform(-kPi, kPi);
    double x = lead.base_pose.x + r * std::cos(phi);
    double y = lead.base_pose.y + r * std::sin(phi);
    double th = rng.uniform(-kPi, kPi);
    for (const auto& f : sys.constraint.fixed_orientation)
      if (f.chain == 0) th = f.theta;
    for (const auto& t : sys.constraint.pose_targets)
      if (t.chain == 0) {
        if (t.mask.x) x = t.pose.x;
        if (t.mask.y) y = t.pose.y;
        if (t.mask.theta) th = t.pose.theta;
      }
    const Pose2d pose(x, y, th);
    const auto targets = chain_targets(sys, pose);
    bool ok = true;
    for (std::size_t c = 0; c < targets.size() && ok; ++c)
      if (targets[c]) ok = in_annulus(sys.chains[c], *targets[c]);
    if (ok) {
      out = pose;
      return true;
    }
  }
  return false;
}

ConfigDataset generate_dataset(const SystemSpec& sys, int n_poses,
                               std::uint64_t seed, const DatasetOptions& opts) {
  sys.validate();
  if (n_poses < 1) throw InvalidArgument("n_poses must be positive");
  ConfigDataset ds;
  ds.system = sys;
  ds.meta.seed = seed;
  ds.meta.n_poses = n_poses;
  ds.meta.max_solutions = opts.ik.max_solutions;
  ds.meta.n_restarts = opts.ik.ik.n_restarts;

  int no_pose = 0, no_ik = 0, rejected = 0, kept = 0;
  for (int k = 0; k < n_poses; ++k) {
    const std::uint64_t pose_seed = Rng::derive(seed, std::uint64_t(k));
    Rng rng(pose_seed);
    Pose2d pose;
    ++ds.meta.poses_attempted;
    if (!sample_object_pose(sys, rng, pose, opts.max_draws_factor)) {
      ++no_pose;
      continue;
    }
    SystemIkOptions ik = opts.ik;
    ik.ik.seed = Rng::derive(pose_seed, 1);
    const auto sols = solve_system_ik(sys, pose, ik);
    if (sols.empty()) ++no_ik;
    std::vector<JointConfig> accepted;
    for (const auto& q : sols) {
      const bool dup = std::any_of(accepted.begin(), accepted.end(),
                                   [&](const JointConfig& a) {
                                     return (a - q).norm() <
                                            opts.ik.ik.dedupe_distance;
                                   });
      if (dup) continue;
      accepted.push_back(q);
      ConfigRecord rec;
      rec.q = q;
      rec.pose_id = k;
      rec.collision_free = self_collision_free(sys, q, opts.clearance);
      if (!rec.collision_free) {
        ++rejected;
        if (!opts.keep_colliding) continue;
      } else {
        ++kept;
      }
      rec.nullspace = manifold_nullspace(sys, q);
      ds.records.push_back(std::move(rec));
    }
  }
  if (kept == 0) {
    std::ostringstream msg;
    msg << "no usable configurations from " << n_poses << " poses ("
        << no_pose << " without a reachable pose, " << no_ik
        << " without IK solutions, " << rejected << " self-colliding)";
    throw GenerationFailure(msg.str());
  }
  return ds;
}

void write_dataset(std::ostream& os, const ConfigDataset& ds) {
  TextWriter w(os);
  write_header(w, {"dataset", ds.hash(), std::int64_t(ds.records.size())});
  w.field("meta").field(std::string_view(std::to_string(ds.meta.seed)))
      .field(ds.meta.n_poses).field(ds.meta.poses_attempted)
      .field(ds.meta.max_solutions).field(ds.meta.n_restarts);
  w.end_line();
  write_system(w, ds.system);
  for (const auto& r : ds.records) {
    w.field("r").field(r.pose_id).field(int(r.collision_free))
        .field(int(r.nullspace.cols())).fields(r.q);
    for (Eigen::Index i = 0; i < r.nullspace.rows(); ++i)
      for (Eigen::Index j = 0; j < r.nullspace.cols(); ++j)
        w.field(r.nullspace(i, j));
    w.end_line();
  }
}

ConfigDataset read_dataset(std::istream& is) {
  TextReader r(is);
  const ContainerHeader h = read_header(r, "dataset");
  ConfigDataset ds;
  r.next("meta");
  {
    const auto seed_text = r.text();
    std::uint64_t s = 0;
    const auto [p, ec] =
        std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), s);
    if (ec != std::errc() || p != seed_text.data() + seed_text.size())
      r.fail("invalid seed");
    ds.meta.seed = s;
  }
  ds.meta.n_poses = int(r.integer());
  ds.meta.poses_attempted = int(r.integer());
  ds.meta.max_solutions = int(r.integer());
  ds.meta.n_restarts = int(r.integer());
  r.done();
  ds.system = read_system(r);
  const Eigen::Index n = ds.system.dof();
  for (std::int64_t k = 0; k < h.count; ++k) {
    r.next("r");
    ConfigRecord rec;
    rec.pose_id = int(r.integer());
    rec.collision_free = r.integer() != 0;
    const auto m = r.integer();
    if (m < 0 || m > n) r.fail("invalid null-space width");
    rec.q = r.reals(n);
    rec.nullspace.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) rec.nullspace(i, j) = r.real();
    r.done();
    ds.records.push_back(std::move(rec));
  }
  if (!r.at_end()) {
    r.next();
    r.fail("trailing content after the last record");
  }
  if (ds.hash() != h.hash)
    throw ParseError(1, 4, "integrity hash mismatch");
  return ds;
}

void save_dataset(const ConfigDataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RuntimeFailure("cannot write " + path);
  write_dataset(os, ds);
  if (!os) throw RuntimeFailure("write failed: " + path);
}

ConfigDataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw RuntimeFailure("cannot read " + path);
  return read_dataset(is);
}

namespace {

double arc_length(double t) {
  return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t));
}

double inverse_arc_length(double s, double lo, double hi) {
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (arc_length(mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SwissRollSet generate_swissroll(int n, int n_pieces, double passage_width,
                                std::uint64_t seed,
                                const SwissRollOptions& opts) {
  if (n_pieces < 1) throw InvalidArgument("n_pieces must be at least 1");
  if (passage_width < 0.0) throw InvalidArgument("passage_width must be >= 0");
  const double piece_h =
      (opts.height - double(n_pieces - 1) * opts.gap) / double(n_pieces);
  if (piece_h <= 0.0) throw InvalidArgument("gaps leave no room for pieces");
  const double s_lo = arc_length(opts.t_min), s_hi = arc_length(opts.t_max);
  const double area = (s_hi - s_lo) * piece_h * double(n_pieces);

  // Bridge points keep the surface density but are never sparser than a
  // chain spaced at half the mean point spacing.
  int per_bridge = 0;
  if (passage_width > 0.0 && n_pieces > 1) {
    const double spacing = std::sqrt(area / double(n));
    per_bridge = std::max<int>(
        int(std::lround(double(n) * passage_width * opts.gap / area)),
        int(std::ceil(2.0 * opts.gap / spacing)) + 1);
  }
  const int n_bridge = per_bridge * (n_pieces - 1);
  if (n_bridge >= n) throw InvalidArgument("too few points for the bridges");
  const int n_main = n - n_bridge;

  Rng rng(seed);
  SwissRollSet out;
  out.points.resize(n, 3);
  out.intrinsic.resize(n, 2);
  out.piece_label.resize(n);
  out.passage_label.assign(n, false);
  auto put = [&](int i, double s, double h) {
    const double t = inverse_arc_length(s, opts.t_min, opts.t_max);
    out.points.row(i) << t * std::cos(t), h, t * std::sin(t);
    out.intrinsic.row(i) << s, h;
  };
  for (int i = 0; i < n_main; ++i) {
    const double s = rng.uniform(s_lo, s_hi);
    const double u = rng.uniform(0.0, piece_h * double(n_pieces));
    const int piece = std::min(n_pieces - 1, int(u / piece_h));
    const double h = u - double(piece) * piece_h + double(piece) * (piece_h + opts.gap);
    put(i, s, h);
    out.piece_label(i) = piece;
  }
  const double s_c = arc_length(opts.bridge_t);
  for (int b = 0; b < n_bridge; ++b) {
    const int piece = b / per_bridge;
    const double s = s_c + rng.uniform(-0.5, 0.5) * passage_width;
    const double h0 = double(piece) * (piece_h + opts.gap) + piece_h;
    const double h = h0 + rng.uniform(0.0, opts.gap);
    put(n_main + b, s, h);
    out.piece_label(n_main + b) = piece;
    out.passage_label[std::size_t(n_main + b)] = true;
  }
  return out;
}

}  // namespace conmap
