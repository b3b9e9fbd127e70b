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
#include "conmap/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace conmap {

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double adjusted_rand_index(const Eigen::Ref<const Eigen::VectorXi>& a,
                           const Eigen::Ref<const Eigen::VectorXi>& b) {
  if (a.size() != b.size()) throw InvalidArgument("labelings differ in size");
  const double n = double(a.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    joint[{a(i), b(i)}] += 1.0;
    ra[a(i)] += 1.0;
    rb[b(i)] += 1.0;
  }
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [k, c] : joint) index += choose2(c);
  for (const auto& [k, c] : ra) sa += choose2(c);
  for (const auto& [k, c] : rb) sb += choose2(c);
  const double expected = sa * sb / choose2(n);
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double auroc(const std::vector<double>& score,
             const std::vector<bool>& positive) {
  if (score.size() != positive.size())
    throw InvalidArgument("score and label counts differ");
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return score[x] < score[y]; });
  // Mann-Whitney U with mid-ranks for ties.
  double rank_sum = 0.0, n_pos = 0.0;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s;
    while (e < order.size() && score[order[e]] == score[order[s]]) ++e;
    const double mid = 0.5 * double(s + 1 + e);
    for (std::size_t k = s; k < e; ++k)
      if (positive[order[k]]) {
        rank_sum += mid;
        n_pos += 1.0;
      }
    s = e;
  }
  const double n_neg = double(score.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0)
    throw InvalidArgument("auroc needs both classes");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace conmap
