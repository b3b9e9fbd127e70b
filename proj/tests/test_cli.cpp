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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "conmap/bench.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "conmap_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    std::ofstream(d / "small.ini")
        << "[dataset]\nposes = 25\n[labels]\nn_neighbors = 3,10\nmin_dist = 0.1,0.2\n"
           "embed_epochs = 60\n[train]\nepochs = 2\nbatch_size = 64\n"
           "[bench]\nik_restarts = 20\n[planner]\ntime_limit = 60\nmax_expansions = 1500\n"
           "[swissroll]\npoints = 500\nn_neighbors = 5,10,30\n";
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + CONMAP_CLI_PATH + "\" " + args +
                          " > \"" + (workdir() / "stdout.txt").string() + "\" 2> \"" +
                          (workdir() / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string small(const std::string& verb, const std::string& out) {
  return verb + " --config \"" + (workdir() / "small.ini").string() + "\" --out \"" +
         (workdir() / out).string() + "\"";
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    auto& r = rows.emplace_back();
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) r.push_back(cell);
  }
  return rows;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("--print-config") == 0);
  CHECK(slurp(workdir() / "stdout.txt").find("[planner]") != std::string::npos);
  CHECK(run("frobnicate") == 1);
  CHECK(run("bench --strategy nearest") == 1);
  CHECK(run("bench --time-limit -1") == 1);
  CHECK(run("labels --out \"" + (workdir() / "missing").string() + "\"") == 2);
  CHECK(slurp(workdir() / "stderr.txt").find("dataset.txt") != std::string::npos);
}

TEST_CASE("pipeline verbs and benchmark accounting") {
  REQUIRE(run(small("generate", "p")) == 0);
  REQUIRE(run(small("labels", "p")) == 0);
  REQUIRE(run(small("train", "p")) == 0);
  for (const char* f : {"dataset.txt", "labels.txt", "model.bin"})
    CHECK(fs::exists(workdir() / "p" / f));

  REQUIRE(run(small("bench", "p") + " --scenes 5") == 0);
  const auto rows = csv_rows(slurp(workdir() / "p" / "bench.csv"));
  REQUIRE(rows.size() == 16);
  std::string header;
  for (std::size_t k = 0; k < rows[0].size(); ++k) header += (k ? "," : "") + rows[0][k];
  CHECK(header == conmap::kBenchCsvHeader);
  const char* order[] = {"random", "joint-space", "feature-space"};
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k][0] == std::to_string((k - 1) / 3));
    CHECK(rows[k][1] == order[(k - 1) % 3]);
  }
  const std::string summary = slurp(workdir() / "p" / "summary.txt");
  for (const char* s : order) CHECK(summary.find(s) != std::string::npos);
  CHECK(fs::exists(workdir() / "p" / "bench.svg"));

  // Same seed and config: identical CSV apart from the wall-clock column.
  fs::copy_file(workdir() / "p" / "bench.csv", workdir() / "first.csv",
                fs::copy_options::overwrite_existing);
  REQUIRE(run(small("bench", "p") + " --scenes 5") == 0);
  auto again = csv_rows(slurp(workdir() / "p" / "bench.csv"));
  auto first = csv_rows(slurp(workdir() / "first.csv"));
  for (auto* t : {&again, &first})
    for (auto& r : *t) r[3].clear();
  CHECK(again == first);

  REQUIRE(run(small("plan", "p") + " --scene 1 --strategy joint-space") == 0);
  CHECK(slurp(workdir() / "stdout.txt").find("joint-space: pair") != std::string::npos);
  CHECK(run(small("bench", "p") + " --strategy feature-space --model nowhere.bin") == 2);
}

TEST_CASE("swissroll figure has two rows of panels") {
  REQUIRE(run(small("swissroll", "s")) == 0);
  const std::string svg = slurp(workdir() / "s" / "swissroll.svg");
  const std::regex panel("<g class=\"panel\"");
  CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), panel),
                      std::sregex_iterator()) == 6);
  CHECK(svg.find("NN=30 latent") != std::string::npos);
}
