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
#include "conmap/collision.hpp"

#include <algorithm>

namespace conmap {

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

namespace {

double cross(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return u.x() * v.y() - u.y() * v.x();
}

bool segments_intersect(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                        const Eigen::Vector2d& b0, const Eigen::Vector2d& b1) {
  const double d1 = cross(a1 - a0, b0 - a0);
  const double d2 = cross(a1 - a0, b1 - a0);
  const double d3 = cross(b1 - b0, a0 - b0);
  const double d4 = cross(b1 - b0, a1 - b0);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

double segment_segment_distance(const Eigen::Vector2d& a0,
                                const Eigen::Vector2d& a1,
                                const Eigen::Vector2d& b0,
                                const Eigen::Vector2d& b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  // Otherwise the minimum is attained at an endpoint of one segment.
  return std::min({point_segment_distance(a0, b0, b1),
                   point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1),
                   point_segment_distance(b1, a0, a1)});
}

bool self_collision_free(const SystemSpec& sys,
                         const Eigen::Ref<const Eigen::VectorXd>& q,
                         double clearance) {
  const int n_chains = int(sys.chains.size());
  std::vector<Eigen::MatrixX2d> pts(n_chains);
  for (int c = 0; c < n_chains; ++c)
    pts[c] = link_points(sys.chains[c], chain_segment(sys, q, c));
  for (int c = 0; c < n_chains; ++c) {
    const Eigen::Index nc = pts[c].rows() - 1;
    for (Eigen::Index a = 0; a < nc; ++a) {
      const Eigen::Vector2d a0 = pts[c].row(a), a1 = pts[c].row(a + 1);
      for (Eigen::Index b = a + 2; b < nc; ++b) {
        if (segment_segment_distance(a0, a1, pts[c].row(b), pts[c].row(b + 1)) <
            clearance)
          return false;
      }
      for (int d = c + 1; d < n_chains; ++d) {
        const Eigen::Index nd = pts[d].rows() - 1;
        for (Eigen::Index b = 0; b < nd; ++b)
          if (segment_segment_distance(a0, a1, pts[d].row(b),
                                       pts[d].row(b + 1)) < clearance)
            return false;
      }
    }
  }
  return true;
}

bool collision_free(const SystemSpec& sys, const std::vector<Obstacle>& obstacles,
                    const Eigen::Ref<const Eigen::VectorXd>& q,
                    double clearance) {
  for (int c = 0; c < int(sys.chains.size()); ++c) {
    const auto pts = link_points(sys.chains[c], chain_segment(sys, q, c));
    for (Eigen::Index k = 0; k + 1 < pts.rows(); ++k)
      for (const auto& o : obstacles)
        if (point_segment_distance(o.center, pts.row(k), pts.row(k + 1)) <
            o.radius + clearance)
          return false;
  }
  return self_collision_free(sys, q, clearance);
}

}  // namespace conmap
