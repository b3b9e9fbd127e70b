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
#include <sstream>

#include "conmap/config.hpp"
#include "doctest.h"

using namespace conmap;

namespace {

Config parse(const std::string& text) {
  std::istringstream is(text);
  Config c;
  read_config(is, c);
  return c;
}

std::string dump(const Config& c) {
  std::ostringstream os;
  write_config(os, c);
  return os.str();
}

}  // namespace

TEST_CASE("defaults are valid and round-trip") {
  const Config c;
  CHECK_NOTHROW(c.validate());
  CHECK(dump(parse(dump(c))) == dump(c));
  CHECK(parse("").train.epochs == c.train.epochs);
}

TEST_CASE("values override defaults and survive a round trip") {
  const Config c = parse(
      "[system]\nlink_lengths = 0.5, 0.5, 0.4, 0.3\njoint_lo = -2,-1,-1,-1\n"
      "joint_hi = 2,1,1,1\n[labels]\nn_neighbors = 5,20\nmin_dist = 0.1,0.3\n"
      "[train]\nlambdas = 0.25,0.75\n[bench]\nstrategies = feature-space,random\n"
      "[planner]\nmax_expansions = 77\n");
  CHECK(c.design.link_lengths == std::vector<double>{0.5, 0.5, 0.4, 0.3});
  CHECK(c.design.joint_limits[0].lo == -2.0);
  CHECK(c.design.joint_limits[0].hi == 2.0);
  CHECK(c.bench_strategies == std::vector<Strategy>{Strategy::kFeatureSpace, Strategy::kRandom});
  CHECK(c.planner.max_expansions == 77);
  const ScaleSchedule s = c.schedule();
  REQUIRE(s.size() == 2);
  CHECK(s.scales[1].first.n_neighbors == 20);
  CHECK(s.scales[1].first.min_dist == 0.3);
  CHECK(s.scales[0].first.seed != s.scales[1].first.seed);
  CHECK(dump(parse(dump(c))) == dump(c));
}

TEST_CASE("malformed configs name the offending key") {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const InvalidArgument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("[train]\nfoo = 1\n").find("train.foo") != std::string::npos);
  CHECK(message("[nosuch]\na = 1\n").find("nosuch") != std::string::npos);
  CHECK(message("[train]\nepochs = ten\n").find("train.epochs") != std::string::npos);
  CHECK(message("[bench]\nstrategies = nearest\n").find("bench.strategies") != std::string::npos);
  CHECK(message("[labels]\nn_neighbors = 3,10\n").find("labels.min_dist") != std::string::npos);
  CHECK(message("[labels]\nn_neighbors = 10,3\nmin_dist = 0.1,0.1\n") != "");
  CHECK(message("[train]\nlambdas = 1\n").find("train.lambdas") != std::string::npos);
  CHECK(message("[planner]\ntime_limit = 0\n").find("planner.time_limit") != std::string::npos);
  CHECK(message("[system]\nfixed_orientation = maybe\n") != "");
  CHECK(message("no section line\n") != "");
}
