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
#include "conmap/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace conmap {

namespace {

namespace pt = boost::property_tree;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) throw InvalidArgument("empty list item");
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

template <class T>
T parse_integer(const std::string& s) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

std::string show(double v) { return format_double(v); }
std::string show(int v) { return std::to_string(v); }
std::string show(long long v) { return std::to_string(v); }
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(bool v) { return v ? "true" : "false"; }

void parse(const std::string& s, double& v) { v = parse_double(s); }
void parse(const std::string& s, int& v) { v = parse_integer<int>(s); }
void parse(const std::string& s, long long& v) { v = parse_integer<long long>(s); }
void parse(const std::string& s, std::uint64_t& v) { v = parse_integer<std::uint64_t>(s); }
void parse(const std::string& s, bool& v) {
  if (s == "true" || s == "1") v = true;
  else if (s == "false" || s == "0") v = false;
  else throw InvalidArgument("not a boolean: '" + s + "'");
}
void parse(const std::string& s, Strategy& v) { v = parse_strategy(s); }
std::string show(Strategy v) { return to_string(v); }

template <class T>
std::string show(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + show(v[i]);
  return out;
}
template <class T>
void parse(const std::string& s, std::vector<T>& v) {
  v.clear();
  for (const auto& item : split_list(s)) parse(item, v.emplace_back());
}

std::string show(const Eigen::Vector4d& v) {
  return show(std::vector<double>(v.data(), v.data() + 4));
}
void parse(const std::string& s, Eigen::Vector4d& v) {
  std::vector<double> x;
  parse(s, x);
  if (x.size() != 4) throw InvalidArgument("expected 4 values");
  v = Eigen::Vector4d(x[0], x[1], x[2], x[3]);
}

struct Key {
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};
using KeyTable = std::map<std::string, std::map<std::string, Key>>;

template <class T>
Key bind(T& field) {
  return {[&field] { return show(field); },
          [&field](const std::string& s) { parse(s, field); }};
}

// Joint limits are split into lo and hi lists of equal length.
Key limits(std::vector<JointLimit>& lim, bool hi) {
  return {[&lim, hi] {
            std::vector<double> v;
            for (const auto& l : lim) v.push_back(hi ? l.hi : l.lo);
            return show(v);
          },
          [&lim, hi](const std::string& s) {
            std::vector<double> v;
            parse(s, v);
            lim.resize(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) (hi ? lim[i].hi : lim[i].lo) = v[i];
          }};
}

KeyTable keys(Config& c) {
  KeyTable t;
  auto& s = t["system"];
  s["link_lengths"] = bind(c.design.link_lengths);
  s["joint_lo"] = limits(c.design.joint_limits, false);
  s["joint_hi"] = limits(c.design.joint_limits, true);
  s["half_base"] = bind(c.design.half_base);
  s["bar_length"] = bind(c.design.bar_length);
  s["fixed_orientation"] = bind(c.design.fixed_orientation);
  s["bar_theta"] = bind(c.design.bar_theta);

  auto& d = t["dataset"];
  d["poses"] = bind(c.dataset_poses);
  d["seed"] = bind(c.dataset_seed);
  d["max_solutions"] = bind(c.dataset_max_solutions);
  d["ik_restarts"] = bind(c.dataset_restarts);

  auto& l = t["labels"];
  l["n_neighbors"] = bind(c.label_neighbors);
  l["min_dist"] = bind(c.label_min_dist);
  l["embed_epochs"] = bind(c.label_epochs);
  l["min_cluster_size"] = bind(c.label_min_cluster_size);
  l["min_samples"] = bind(c.label_min_samples);
  l["seed"] = bind(c.label_seed);

  auto& tr = t["train"];
  tr["lr"] = bind(c.train.lr);
  tr["batch_size"] = bind(c.train.batch_size);
  tr["epochs"] = bind(c.train.epochs);
  tr["tau"] = bind(c.train.tau);
  tr["lambdas"] = bind(c.train.lambdas);
  tr["aug_sigma"] = bind(c.train.aug_sigma);
  tr["hidden"] = bind(c.train.dims.h);
  tr["feature"] = bind(c.train.dims.d);
  tr["projection"] = bind(c.train.dims.p);
  tr["seed"] = bind(c.train.seed);

  auto& o = t["oracle"];
  o["samples"] = bind(c.oracle_samples);
  o["radius"] = bind(c.oracle_radius);
  o["seed"] = bind(c.oracle_seed);

  auto& b = t["bench"];
  b["scenes"] = bind(c.bench_scenes);
  b["seed"] = bind(c.bench_seed);
  b["threads"] = bind(c.bench_threads);
  b["strategies"] = bind(c.bench_strategies);
  b["obstacles"] = bind(c.scene.n_obstacles);
  b["obstacle_r_min"] = bind(c.scene.obstacle_r_min);
  b["obstacle_r_max"] = bind(c.scene.obstacle_r_max);
  b["obstacle_box"] = bind(c.scene.obstacle_box);
  b["object_box"] = bind(c.scene.object_box);
  b["min_candidates"] = bind(c.scene.min_candidates);
  b["ik_restarts"] = bind(c.scene.ik.ik.n_restarts);

  auto& p = t["planner"];
  p["step_size"] = bind(c.planner.step_size);
  p["resolution"] = bind(c.planner.resolution);
  p["connect_every"] = bind(c.planner.connect_every);
  p["time_limit"] = bind(c.planner.time_limit);
  p["max_expansions"] = bind(c.planner.max_expansions);

  auto& w = t["swissroll"];
  w["points"] = bind(c.swissroll_points);
  w["pieces"] = bind(c.swissroll_pieces);
  w["passage_width"] = bind(c.swissroll_passage);
  w["seed"] = bind(c.swissroll_seed);
  w["n_neighbors"] = bind(c.swissroll_neighbors);
  w["min_dist"] = bind(c.swissroll_min_dist);
  return t;
}

const char* const kSectionOrder[] = {"system", "dataset", "labels", "train",
                                     "oracle", "bench", "planner", "swissroll"};

}  // namespace

TrainConfig Config::desk_train_config() {
  TrainConfig t;
  t.lr = 1e-3;
  t.batch_size = 256;
  t.epochs = 50;
  t.seed = 1;
  return t;
}

SceneOptions Config::default_scene_options() {
  SceneOptions s;
  s.ik.ik.n_restarts = 50;
  return s;
}

SystemSpec Config::system() const { return dual_arm_system(design); }

ScaleSchedule Config::schedule() const {
  ScaleSchedule s;
  for (std::size_t k = 0; k < label_neighbors.size(); ++k) {
    EmbedParams ep;
    ep.n_neighbors = label_neighbors[k];
    ep.min_dist = label_min_dist[k];
    ep.n_epochs = label_epochs;
    ep.seed = Rng::derive(label_seed, k);
    s.scales.emplace_back(ep, ClusterParams{label_min_cluster_size, label_min_samples});
  }
  return s;
}

ScaleSchedule Config::swissroll_schedule() const {
  ScaleSchedule s = ScaleSchedule::from_neighbors(
      swissroll_neighbors, swissroll_min_dist,
      ClusterParams{label_min_cluster_size, label_min_samples}, label_seed);
  for (auto& [ep, cp] : s.scales) ep.n_epochs = label_epochs;
  return s;
}

DatasetOptions Config::dataset_options() const {
  DatasetOptions o;
  o.ik.max_solutions = dataset_max_solutions;
  o.ik.ik.n_restarts = dataset_restarts;
  return o;
}

BenchOptions Config::bench_options() const {
  BenchOptions o;
  o.strategies = bench_strategies;
  o.planner = planner;
  o.threads = bench_threads;
  return o;
}

void Config::validate() const {
  auto need = [](bool ok, const char* key, const char* what) {
    if (!ok) throw InvalidArgument(std::string(key) + ": " + what);
  };
  need(design.link_lengths.size() == 4, "system.link_lengths", "need 4 links");
  need(design.joint_limits.size() == 4, "system.joint_lo/joint_hi", "need 4 limits");
  for (const auto& l : design.joint_limits)
    need(l.lo < l.hi, "system.joint_lo/joint_hi", "lo must be below hi");
  need(dataset_poses >= 1, "dataset.poses", "must be positive");
  need(!label_neighbors.empty(), "labels.n_neighbors", "must not be empty");
  need(label_neighbors.size() == label_min_dist.size(), "labels.min_dist",
       "needs one value per n_neighbors entry");
  need(train.lambdas.empty() || train.lambdas.size() == label_neighbors.size(),
       "train.lambdas", "needs one weight per scale");
  need(oracle_samples >= 2, "oracle.samples", "must be at least 2");
  need(oracle_radius > 0.0, "oracle.radius", "must be positive");
  need(bench_scenes >= 1, "bench.scenes", "must be at least 1");
  need(!bench_strategies.empty(), "bench.strategies", "must not be empty");
  need(scene.n_obstacles >= 0, "bench.obstacles", "must not be negative");
  need(planner.time_limit > 0.0, "planner.time_limit", "must be positive");
  need(planner.step_size > 0.0, "planner.step_size", "must be positive");
  need(swissroll_points >= 2, "swissroll.points", "must be at least 2");
  need(!swissroll_neighbors.empty(), "swissroll.n_neighbors", "must not be empty");
  schedule().validate();
  swissroll_schedule().validate();
}

void read_config(std::istream& is, Config& cfg) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  KeyTable table = keys(cfg);
  for (const auto& [section, entries] : tree) {
    const auto sec = table.find(section);
    if (sec == table.end() || entries.empty())
      throw InvalidArgument("unknown config section [" + section + "]");
    for (const auto& [key, value] : entries) {
      const auto k = sec->second.find(key);
      if (k == sec->second.end())
        throw InvalidArgument("unknown config key " + section + "." + key);
      try {
        k->second.set(value.data());
      } catch (const std::exception& e) {
        throw InvalidArgument(section + "." + key + ": " + e.what());
      }
    }
  }
  cfg.validate();
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot read config " + path);
  Config cfg;
  read_config(is, cfg);
  return cfg;
}

void write_config(std::ostream& os, const Config& cfg) {
  Config copy = cfg;
  KeyTable table = keys(copy);
  bool first = true;
  for (const char* section : kSectionOrder) {
    os << (first ? "" : "\n") << '[' << section << "]\n";
    first = false;
    for (const auto& [key, k] : table.at(section)) os << key << " = " << k.get() << '\n';
  }
}

}  // namespace conmap
