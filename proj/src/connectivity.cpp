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
#include "conmap/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conmap {

Strategy parse_strategy(const std::string& name) {
  if (name == "random") return Strategy::kRandom;
  if (name == "joint-space") return Strategy::kJointSpace;
  if (name == "feature-space") return Strategy::kFeatureSpace;
  throw InvalidArgument("unknown strategy '" + name +
                        "' (random | joint-space | feature-space)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kRandom:
      return "random";
    case Strategy::kJointSpace:
      return "joint-space";
    case Strategy::kFeatureSpace:
      return "feature-space";
  }
  return "?";
}

Eigen::VectorXd features(const EncoderModel& m,
                         const Eigen::Ref<const Eigen::VectorXd>& q,
                         FeatureSource src) {
  const ForwardOutput f = forward(m, q);
  return src == FeatureSource::kEncoder ? f.feature : f.projection;
}

double p_conn(const EncoderModel& m, const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b, FeatureSource src) {
  return std::exp(-(features(m, a, src) - features(m, b, src)).norm());
}

namespace {

void check_lists(const std::vector<JointConfig>& starts,
                 const std::vector<JointConfig>& goals) {
  if (starts.empty() || goals.empty())
    throw EmptyCandidates("start and goal candidate lists must be non-empty");
}

Eigen::MatrixXd stack_columns(const std::vector<JointConfig>& qs) {
  Eigen::MatrixXd Q(qs.front().size(), Eigen::Index(qs.size()));
  for (std::size_t k = 0; k < qs.size(); ++k) {
    if (qs[k].size() != Q.rows())
      throw InvalidArgument("candidates differ in dimension");
    Q.col(Eigen::Index(k)) = qs[k];
  }
  return Q;
}

Eigen::MatrixXd batch_features(const EncoderModel& m,
                               const std::vector<JointConfig>& qs,
                               FeatureSource src) {
  const Eigen::MatrixXd Q = stack_columns(qs);
  return src == FeatureSource::kEncoder ? encode(m, Q) : project_head(m, Q);
}

}  // namespace

std::vector<PairScore> rank_pairs(const EncoderModel& m,
                                  const std::vector<JointConfig>& starts,
                                  const std::vector<JointConfig>& goals,
                                  FeatureSource src) {
  check_lists(starts, goals);
  const Eigen::MatrixXd Fs = batch_features(m, starts, src);
  const Eigen::MatrixXd Fg = batch_features(m, goals, src);
  std::vector<PairScore> out;
  out.reserve(starts.size() * goals.size());
  for (Eigen::Index s = 0; s < Fs.cols(); ++s)
    for (Eigen::Index g = 0; g < Fg.cols(); ++g) {
      PairScore p;
      p.start_index = int(s);
      p.goal_index = int(g);
      p.feature_distance = (Fs.col(s) - Fg.col(g)).norm();
      p.p_conn = std::exp(-p.feature_distance);
      out.push_back(p);
    }
  std::stable_sort(out.begin(), out.end(),
                   [](const PairScore& a, const PairScore& b) {
                     return a.feature_distance < b.feature_distance;
                   });
  return out;
}

std::pair<int, int> select_pair(const EncoderModel* m,
                                const std::vector<JointConfig>& starts,
                                const std::vector<JointConfig>& goals,
                                Strategy strategy, std::uint64_t seed,
                                FeatureSource src) {
  check_lists(starts, goals);
  switch (strategy) {
    case Strategy::kRandom: {
      Rng rng(seed);
      const int s = int(rng.uniform_index(starts.size()));
      const int g = int(rng.uniform_index(goals.size()));
      return {s, g};
    }
    case Strategy::kJointSpace: {
      std::pair<int, int> best{0, 0};
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < starts.size(); ++s)
        for (std::size_t g = 0; g < goals.size(); ++g) {
          const double d = (starts[s] - goals[g]).norm();
          if (d < best_d) {
            best_d = d;
            best = {int(s), int(g)};
          }
        }
      return best;
    }
    case Strategy::kFeatureSpace: {
      if (!m) throw InvalidArgument("feature-space selection needs a model");
      const PairScore top = rank_pairs(*m, starts, goals, src).front();
      return {top.start_index, top.goal_index};
    }
  }
  throw InvalidArgument("unknown strategy");
}

}  // namespace conmap
