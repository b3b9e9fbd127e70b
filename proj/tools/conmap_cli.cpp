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
// conmap: dataset generation, pseudo-labels, training, planning and the
// randomized-scene benchmark from one binary.
//
// Exit status: 0 on success, 1 on a usage error, 2 on a runtime failure.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "conmap/bench.hpp"
#include "conmap/config.hpp"
#include "conmap/dataset.hpp"
#include "conmap/encoder.hpp"
#include "conmap/metrics.hpp"
#include "conmap/oracle.hpp"
#include "conmap/pseudolabels.hpp"
#include "conmap/svg.hpp"

namespace fs = std::filesystem;
using namespace conmap;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string strategies;
  std::optional<double> time_limit;
  std::optional<int> scenes;
  bool print_config = false;

  std::string dataset, labels, model, oracle;
  bool with_oracle = false;
  int scene_id = 0;
};

std::string in_out(const Options& o, const std::string& given, const char* name) {
  return given.empty() ? (fs::path(o.out) / name).string() : given;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw RuntimeFailure("cannot write " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Config make_config(const Options& o) {
  Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
  if (!o.strategies.empty()) {
    cfg.bench_strategies.clear();
    std::stringstream ss(o.strategies);
    for (std::string s; std::getline(ss, s, ',');)
      cfg.bench_strategies.push_back(parse_strategy(s));
  }
  if (o.time_limit) cfg.planner.time_limit = *o.time_limit;
  if (o.scenes) cfg.bench_scenes = *o.scenes;
  cfg.validate();
  return cfg;
}

int cmd_generate(const Options& o, Config cfg) {
  if (o.seed) cfg.dataset_seed = *o.seed;
  const SystemSpec sys = cfg.system();
  const auto t0 = std::chrono::steady_clock::now();
  const ConfigDataset ds =
      generate_dataset(sys, cfg.dataset_poses, cfg.dataset_seed, cfg.dataset_options());
  const auto path = in_out(o, o.dataset, "dataset.txt");
  save_dataset(ds, path);
  std::cout << "dataset: " << ds.records.size() << " configurations from "
            << ds.meta.n_poses << " poses (" << seconds_since(t0) << " s) -> " << path
            << "\n";
  if (o.with_oracle) {
    const auto t1 = std::chrono::steady_clock::now();
    const OracleGraph g =
        build_oracle(sys, cfg.oracle_samples, cfg.oracle_radius, {}, cfg.oracle_seed);
    const auto opath = in_out(o, o.oracle, "oracle.txt");
    save_oracle(g, opath);
    std::cout << "oracle: " << g.samples.size() << " samples, " << g.n_components
              << " components (" << seconds_since(t1) << " s) -> " << opath << "\n";
  }
  return 0;
}

int cmd_labels(const Options& o, Config cfg) {
  if (o.seed) cfg.label_seed = *o.seed;
  const ConfigDataset ds = load_dataset(in_out(o, o.dataset, "dataset.txt"));
  const auto t0 = std::chrono::steady_clock::now();
  const PseudoLabelMatrix m =
      build_pseudolabels(ds.training_matrix(), cfg.schedule(), ds.hash());
  const auto path = in_out(o, o.labels, "labels.txt");
  save_labels(m, path);
  for (int k = 0; k < m.n_scales(); ++k)
    std::cout << "scale " << k << ": n_neighbors " << m.schedule.scales[k].first.n_neighbors
              << ", " << m.diagnostics[k].n_clusters << " clusters, noise "
              << m.diagnostics[k].noise_fraction << "\n";
  std::cout << "labels (" << seconds_since(t0) << " s) -> " << path << "\n";
  return 0;
}

int cmd_train(const Options& o, Config cfg) {
  if (o.seed) cfg.train.seed = *o.seed;
  const ConfigDataset ds = load_dataset(in_out(o, o.dataset, "dataset.txt"));
  const PseudoLabelMatrix m = load_labels(in_out(o, o.labels, "labels.txt"));
  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult r = train(ds, m, cfg.train);
  const auto path = in_out(o, o.model, "model.bin");
  save_model(r.model, path);
  std::cout << "loss " << r.loss_history.front() << " -> " << r.loss_history.back()
            << " over " << r.loss_history.size() << " epochs (" << seconds_since(t0)
            << " s) -> " << path << "\n";
  return 0;
}

int cmd_plan(const Options& o, Config cfg) {
  if (o.seed) cfg.bench_seed = *o.seed;
  const SystemSpec sys = cfg.system();
  const Scene sc = make_scene(sys, o.scene_id, cfg.bench_seed, cfg.scene);
  std::optional<EncoderModel> model;
  if (!o.model.empty() || fs::exists(in_out(o, "", "model.bin")))
    model = load_model(in_out(o, o.model, "model.bin"));
  PlanningProblem p;
  p.system = sys;
  p.obstacles = sc.obstacles;
  p.params = cfg.planner;
  p.seed = Rng::derive(sc.seed, 202);
  std::ofstream os(fs::path(o.out) / "path.csv");
  os << "strategy,waypoint";
  for (int j = 0; j < sys.dof(); ++j) os << ",q" << j;
  os << '\n';
  for (Strategy st : cfg.bench_strategies) {
    if (st == Strategy::kFeatureSpace && !model)
      throw InvalidArgument("feature-space selection needs --model");
    const auto [s, g] = select_pair(model ? &*model : nullptr, sc.starts, sc.goals, st,
                                    Rng::derive(sc.seed, 101));
    p.q_start = sc.starts[s];
    p.q_goal = sc.goals[g];
    const PlanResult r = plan(p);
    std::cout << to_string(st) << ": pair (" << s << ", " << g << ") "
              << (r.success ? "solved" : "failed") << " in " << r.elapsed << " s, "
              << r.nodes_expanded << " nodes";
    if (r.success) std::cout << ", " << r.path.size() << " waypoints";
    std::cout << "\n";
    for (std::size_t w = 0; w < r.path.size(); ++w) {
      os << to_string(st) << ',' << w;
      for (double v : r.path[w]) os << ',' << format_double(v);
      os << '\n';
    }
  }
  if (!os) throw RuntimeFailure("cannot write path.csv");
  return 0;
}

int cmd_bench(const Options& o, Config cfg) {
  if (o.seed) cfg.bench_seed = *o.seed;
  const SystemSpec sys = cfg.system();
  std::optional<EncoderModel> model;
  const bool need_model =
      std::count(cfg.bench_strategies.begin(), cfg.bench_strategies.end(),
                 Strategy::kFeatureSpace) > 0;
  if (need_model) model = load_model(in_out(o, o.model, "model.bin"));
  std::optional<OracleGraph> oracle;
  if (!o.oracle.empty()) oracle = load_oracle(o.oracle);

  const auto t0 = std::chrono::steady_clock::now();
  const auto scenes = make_scenes(sys, cfg.bench_scenes, cfg.bench_seed, cfg.scene);
  BenchOptions bo = cfg.bench_options();
  if (oracle) bo.oracle = &*oracle;
  const auto rows = run_bench(sys, scenes, model ? &*model : nullptr, bo);

  const fs::path out(o.out);
  {
    std::ofstream os(out / "bench.csv", std::ios::binary);
    write_csv(os, rows);
    if (!os) throw RuntimeFailure("cannot write bench.csv");
  }
  const auto summary = summarize(rows);
  const std::string table = format_summary(summary);
  write_file(out / "summary.txt", table);
  write_file(out / "bench.svg", bench_svg(summary));
  std::cout << table << rows.size() << " rows over " << scenes.size() << " scenes ("
            << seconds_since(t0) << " s) -> " << (out / "bench.csv").string() << "\n";
  return 0;
}

int cmd_swissroll(const Options& o, Config cfg) {
  if (o.seed) cfg.swissroll_seed = *o.seed;
  const SwissRollSet sr = generate_swissroll(cfg.swissroll_points, cfg.swissroll_pieces,
                                             cfg.swissroll_passage, cfg.swissroll_seed);
  const ScaleSchedule sched = cfg.swissroll_schedule();
  std::vector<Eigen::MatrixXd> latent(std::size_t(sched.size()));
  const PseudoLabelMatrix m =
      build_pseudolabels(sr.points, sched, {},
                         [&](int k, const LatentEmbedding& e) { latent[k] = e.coords; });
  const Eigen::MatrixXd view = oblique_view(sr.points);
  std::vector<ScatterPanel> panels;
  for (int row = 0; row < 2; ++row)
    for (int k = 0; k < m.n_scales(); ++k) {
      const int nn = sched.scales[k].first.n_neighbors;
      ScatterPanel p;
      p.labels = m.labels.col(k);
      if (row == 0) {
        p.xy = view;
        p.title = "NN=" + std::to_string(nn) + ": " +
                  std::to_string(m.diagnostics[k].n_clusters) + " clusters";
      } else {
        p.xy = latent[k].leftCols(2);
        p.title = "NN=" + std::to_string(nn) + " latent";
      }
      panels.push_back(std::move(p));
    }
  const fs::path path = fs::path(o.out) / "swissroll.svg";
  write_file(path, scatter_grid_svg(panels, 2, m.n_scales()));
  for (int k = 0; k < m.n_scales(); ++k)
    std::cout << "NN=" << sched.scales[k].first.n_neighbors << ": "
              << m.diagnostics[k].n_clusters << " clusters, noise "
              << m.diagnostics[k].noise_fraction << ", ARI vs pieces "
              << adjusted_rand_index(m.labels.col(k), sr.piece_label) << "\n";
  std::cout << "-> " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned connectivity for constrained motion planning"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Config file (key = value, [sections])")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Seed override for the chosen verb");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--strategy", o.strategies,
                 "Comma list of random, joint-space, feature-space");
  app.add_option("--time-limit", o.time_limit, "Planning time limit (s)");
  app.add_option("--scenes", o.scenes, "Number of benchmark scenes");
  app.add_flag("--print-config", o.print_config, "Print the effective config and exit");

  using Verb = int (*)(const Options&, Config);
  std::vector<std::pair<CLI::App*, Verb>> verbs;
  auto* gen = app.add_subcommand("generate", "Sample IK solutions into a dataset");
  gen->add_option("--dataset", o.dataset, "Dataset path (default OUT/dataset.txt)");
  gen->add_option("--oracle", o.oracle, "Oracle path (default OUT/oracle.txt)");
  gen->add_flag("--with-oracle", o.with_oracle, "Also build the connectivity oracle");
  verbs.emplace_back(gen, cmd_generate);
  auto* lab = app.add_subcommand("labels", "Build multi-scale pseudo-labels");
  lab->add_option("--dataset", o.dataset);
  lab->add_option("--labels", o.labels);
  verbs.emplace_back(lab, cmd_labels);
  auto* trn = app.add_subcommand("train", "Train the encoder");
  trn->add_option("--dataset", o.dataset);
  trn->add_option("--labels", o.labels);
  trn->add_option("--model", o.model);
  verbs.emplace_back(trn, cmd_train);
  auto* pln = app.add_subcommand("plan", "Select a pair and plan in one scene");
  pln->add_option("--model", o.model);
  pln->add_option("--scene", o.scene_id, "Scene index")->check(CLI::NonNegativeNumber);
  verbs.emplace_back(pln, cmd_plan);
  auto* bch = app.add_subcommand("bench", "Randomized-scene benchmark");
  bch->add_option("--model", o.model);
  bch->add_option("--oracle", o.oracle, "Oracle file for the same-component column");
  verbs.emplace_back(bch, cmd_bench);
  auto* swr = app.add_subcommand("swissroll", "Swiss roll pseudo-label figure");
  verbs.emplace_back(swr, cmd_swissroll);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    const Config cfg = make_config(o);
    if (o.print_config) {
      write_config(std::cout, cfg);
      return 0;
    }
    for (auto& [sub, verb] : verbs)
      if (sub->parsed()) {
        fs::create_directories(o.out);
        return verb(o, cfg);
      }
    std::cerr << app.help();
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
