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
#include "conmap/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace conmap {

SystemSpec dual_arm_system(const DualArmDesign& d) {
  if (d.link_lengths.size() != d.joint_limits.size())
    throw InvalidArgument("design needs one limit per link");
  SystemSpec sys;
  ChainSpec left;
  left.link_lengths = d.link_lengths;
  left.joint_limits = d.joint_limits;
  left.base_pose = Pose2d(-d.half_base, 0.0, kPi / 2);
  ChainSpec right = left;
  right.base_pose = Pose2d(d.half_base, 0.0, kPi / 2);
  for (auto& lim : right.joint_limits) lim = {-lim.hi, -lim.lo};
  sys.chains = {left, right};
  sys.constraint.grasp_pairs.push_back({0, 1, Pose2d(d.bar_length, 0.0, kPi)});
  if (d.fixed_orientation)
    sys.constraint.fixed_orientation.push_back({0, d.bar_theta});
  sys.validate();
  return sys;
}

namespace {

std::vector<JointConfig> scene_candidates(const SystemSpec& sys,
                                          const std::vector<Obstacle>& obs,
                                          const Pose2d& pose,
                                          const SceneOptions& opts,
                                          std::uint64_t seed) {
  SystemIkOptions ik = opts.ik;
  ik.ik.seed = seed;
  std::vector<JointConfig> out;
  for (auto& q : solve_system_ik(sys, pose, ik)) {
    if (!collision_free(sys, obs, q, opts.clearance)) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const JointConfig& a) {
      return (a - q).norm() < ik.ik.dedupe_distance;
    });
    if (!dup) out.push_back(std::move(q));
  }
  return out;
}

Pose2d draw_object_pose(const SystemSpec& sys, Rng& rng, const Eigen::Vector4d& box) {
  double theta = rng.uniform(-kPi, kPi);
  for (const auto& f : sys.constraint.fixed_orientation)
    if (f.chain == 0) theta = f.theta;
  const double x = rng.uniform(box(0), box(1));
  const double y = rng.uniform(box(2), box(3));
  return Pose2d(x, y, theta);
}

}  // namespace

Scene make_scene(const SystemSpec& sys, int id, std::uint64_t seed,
                 const SceneOptions& opts) {
  Scene sc;
  sc.id = id;
  sc.seed = Rng::derive(seed, std::uint64_t(id));
  Rng rng(sc.seed);
  for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
    sc.obstacles.clear();
    for (int k = 0; k < opts.n_obstacles; ++k) {
      Obstacle o;
      o.center = {rng.uniform(opts.obstacle_box(0), opts.obstacle_box(1)),
                  rng.uniform(opts.obstacle_box(2), opts.obstacle_box(3))};
      o.radius = rng.uniform(opts.obstacle_r_min, opts.obstacle_r_max);
      sc.obstacles.push_back(o);
    }
    sc.start_pose = draw_object_pose(sys, rng, opts.object_box);
    sc.goal_pose = draw_object_pose(sys, rng, opts.object_box);
    const std::uint64_t s1 = rng.next_u64(), s2 = rng.next_u64();
    sc.starts = scene_candidates(sys, sc.obstacles, sc.start_pose, opts, s1);
    if (int(sc.starts.size()) < opts.min_candidates) continue;
    sc.goals = scene_candidates(sys, sc.obstacles, sc.goal_pose, opts, s2);
    if (int(sc.goals.size()) < opts.min_candidates) continue;
    return sc;
  }
  throw RuntimeFailure("scene " + std::to_string(id) +
                       ": no start/goal poses with enough collision-free IK "
                       "candidates after " +
                       std::to_string(opts.max_tries) + " tries");
}

std::vector<Scene> make_scenes(const SystemSpec& sys, int n_scenes,
                               std::uint64_t seed, const SceneOptions& opts) {
  if (n_scenes < 1) throw InvalidArgument("n_scenes must be positive");
  std::vector<Scene> out;
  for (int k = 0; k < n_scenes; ++k) out.push_back(make_scene(sys, k, seed, opts));
  return out;
}

std::optional<PlanResult> PlanCache::find(int scene, int s, int g) const {
  std::lock_guard lock(mu_);
  const auto it = results_.find({scene, s, g});
  if (it == results_.end()) return std::nullopt;
  return it->second;
}

void PlanCache::store(int scene, int s, int g, const PlanResult& r) {
  std::lock_guard lock(mu_);
  results_.emplace(std::make_tuple(scene, s, g), r);
}

namespace {

std::vector<BenchRow> run_scene(const SystemSpec& sys, const Scene& sc,
                                const EncoderModel* model,
                                const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  std::map<std::pair<int, int>, PlanResult> local;
  const std::uint64_t select_seed = Rng::derive(sc.seed, 101);
  const std::uint64_t plan_seed = Rng::derive(sc.seed, 202);
  for (Strategy st : opts.strategies) {
    const auto [s, g] = select_pair(model, sc.starts, sc.goals, st, select_seed,
                                    opts.feature_source);
    PlanResult res;
    if (auto it = local.find({s, g}); it != local.end()) {
      res = it->second;
    } else if (auto hit = opts.cache ? opts.cache->find(sc.id, s, g) : std::nullopt) {
      res = *hit;
    } else {
      PlanningProblem p;
      p.system = sys;
      p.q_start = sc.starts[s];
      p.q_goal = sc.goals[g];
      p.obstacles = sc.obstacles;
      p.params = opts.planner;
      p.seed = plan_seed;
      res = plan(p);
      res.path.clear();  // keep memory flat across long runs
      if (opts.cache) opts.cache->store(sc.id, s, g, res);
    }
    local[{s, g}] = res;
    BenchRow row;
    row.scene_id = sc.id;
    row.strategy = st;
    row.success = res.success;
    row.planning_time_s = res.elapsed;
    row.start_idx = s;
    row.goal_idx = g;
    row.nodes_expanded = res.nodes_expanded;
    if (opts.oracle) {
      const auto a = attach(*opts.oracle, sc.starts[s]);
      const auto b = attach(*opts.oracle, sc.goals[g]);
      if (a && b)
        row.oracle_same_component =
            opts.oracle->component[*a] == opts.oracle->component[*b];
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<BenchRow> run_bench(const SystemSpec& sys,
                                const std::vector<Scene>& scenes,
                                const EncoderModel* model,
                                const BenchOptions& opts) {
  const bool needs_model = std::find(opts.strategies.begin(), opts.strategies.end(),
                                     Strategy::kFeatureSpace) != opts.strategies.end();
  if (needs_model && !model)
    throw InvalidArgument("feature-space strategy needs a model");
  std::vector<std::vector<BenchRow>> per_scene(scenes.size());
  int threads = opts.threads > 0 ? opts.threads
                                 : int(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, int(scenes.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < scenes.size(); ++k)
      per_scene[k] = run_scene(sys, scenes[k], model, opts);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next++) < scenes.size();)
          per_scene[k] = run_scene(sys, scenes[k], model, opts);
      });
  }
  std::vector<BenchRow> rows;
  for (auto& v : per_scene) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.scene_id << ',' << to_string(r.strategy) << ',' << int(r.success)
       << ',' << format_double(r.planning_time_s) << ',' << r.start_idx << ','
       << r.goal_idx << ',';
    if (r.oracle_same_component) os << int(*r.oracle_same_component);
    os << '\n';
  }
}

std::vector<StrategySummary> summarize(const std::vector<BenchRow>& rows) {
  if (rows.empty()) throw InvalidArgument("no benchmark rows to summarize");
  std::vector<Strategy> order;
  for (const auto& r : rows)
    if (std::find(order.begin(), order.end(), r.strategy) == order.end())
      order.push_back(r.strategy);
  std::vector<StrategySummary> out;
  for (Strategy st : order) {
    StrategySummary s;
    s.strategy = st;
    double sum = 0.0;
    std::vector<double> times;
    for (const auto& r : rows) {
      if (r.strategy != st) continue;
      ++s.trials;
      if (r.success) {
        times.push_back(r.planning_time_s);
        sum += r.planning_time_s;
      }
    }
    s.successes = int(times.size());
    s.success_rate = 100.0 * double(s.successes) / double(s.trials);
    if (!times.empty()) {
      const double mean = sum / double(times.size());
      double var = 0.0;
      for (double t : times) var += (t - mean) * (t - mean);
      s.mean_time_s = mean;
      s.std_time_s = std::sqrt(var / double(times.size()));
    }
    out.push_back(s);
  }
  return out;
}

std::string format_summary(const std::vector<StrategySummary>& s) {
  std::ostringstream os;
  os << "strategy        success  time_s (successful trials, mean +- population std)\n";
  for (const auto& r : s) {
    os << std::left << std::setw(16) << to_string(r.strategy) << std::right
       << std::setw(6) << std::fixed << std::setprecision(1) << r.success_rate
       << "%  ";
    if (r.mean_time_s)
      os << std::setprecision(3) << *r.mean_time_s << " +- " << *r.std_time_s;
    else
      os << "-";
    os << "  (" << r.successes << "/" << r.trials << ")\n";
  }
  return os.str();
}

}  // namespace conmap
