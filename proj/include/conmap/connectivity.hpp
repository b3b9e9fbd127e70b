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
#ifndef CONMAP_CONNECTIVITY_HPP_
#define CONMAP_CONNECTIVITY_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conmap/encoder.hpp"

namespace conmap {

enum class Strategy { kRandom, kJointSpace, kFeatureSpace };

/// "random", "joint-space" or "feature-space".
Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

/// Which network output the distance is measured on.
enum class FeatureSource { kEncoder, kProjector };

Eigen::VectorXd features(const EncoderModel& m,
                         const Eigen::Ref<const Eigen::VectorXd>& q,
                         FeatureSource src = FeatureSource::kEncoder);

/// exp(-||phi(a) - phi(b)||).
double p_conn(const EncoderModel& m, const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b,
              FeatureSource src = FeatureSource::kEncoder);

struct PairScore {
  int start_index = 0;
  int goal_index = 0;
  double feature_distance = 0.0;
  double p_conn = 1.0;
};

class EmptyCandidates : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Every start/goal pair, best first; equal scores keep (start, goal)
/// lexicographic order.
std::vector<PairScore> rank_pairs(const EncoderModel& m,
                                  const std::vector<JointConfig>& starts,
                                  const std::vector<JointConfig>& goals,
                                  FeatureSource src = FeatureSource::kEncoder);

/// The model is only read for kFeatureSpace and may be null otherwise.
std::pair<int, int> select_pair(const EncoderModel* m,
                                const std::vector<JointConfig>& starts,
                                const std::vector<JointConfig>& goals,
                                Strategy strategy, std::uint64_t seed,
                                FeatureSource src = FeatureSource::kEncoder);

}  // namespace conmap

#endif  // CONMAP_CONNECTIVITY_HPP_
