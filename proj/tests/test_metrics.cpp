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
#include "doctest.h"

using namespace conmap;

namespace {
Eigen::VectorXi vec(std::initializer_list<int> v) {
  Eigen::VectorXi out(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (int x : v) out(i++) = x;
  return out;
}
}  // namespace

TEST_CASE("adjusted Rand index") {
  CHECK(adjusted_rand_index(vec({0, 0, 1, 1}), vec({1, 1, 0, 0})) == doctest::Approx(1.0));
  // Contingency pairs 2, row pairs 6, column pairs 3, total pairs 15.
  CHECK(adjusted_rand_index(vec({0, 0, 0, 1, 1, 1}), vec({0, 0, 1, 1, 2, 2})) ==
        doctest::Approx((2.0 - 6.0 * 3.0 / 15.0) / (0.5 * (6.0 + 3.0) - 6.0 * 3.0 / 15.0)));
  CHECK(adjusted_rand_index(vec({0, 1, 2, 3}), vec({0, 0, 0, 0})) == doctest::Approx(0.0));
  CHECK(adjusted_rand_index(vec({-1, -1, 0, 0}), vec({5, 5, 6, 6})) == doctest::Approx(1.0));
}

TEST_CASE("AUROC with ties") {
  CHECK(auroc({0.9, 0.8, 0.1, 0.2}, {true, true, false, false}) == doctest::Approx(1.0));
  CHECK(auroc({0.1, 0.2, 0.9, 0.8}, {true, true, false, false}) == doctest::Approx(0.0));
  CHECK(auroc({0.5, 0.5, 0.5, 0.5}, {true, false, true, false}) == doctest::Approx(0.5));
  // Positives {0.8, 0.4}, negatives {0.6, 0.4}: win, win, lose, tie -> 2.5/4.
  CHECK(auroc({0.8, 0.4, 0.6, 0.4}, {true, true, false, false}) == doctest::Approx(0.625));
}
