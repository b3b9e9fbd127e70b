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
#include "conmap/pseudolabels.hpp"

#include <charconv>
#include <fstream>

#include "conmap/textio.hpp"

namespace conmap {

void ScaleSchedule::validate() const {
  if (scales.empty()) throw InvalidArgument("scale schedule is empty");
  for (std::size_t k = 1; k < scales.size(); ++k)
    if (scales[k].first.n_neighbors < scales[k - 1].first.n_neighbors)
      throw InvalidArgument("scales must be ordered by n_neighbors");
  for (const auto& s : scales) s.second.validate();
}

ScaleSchedule ScaleSchedule::standard(std::uint64_t seed) {
  ScaleSchedule s;
  const std::pair<int, double> grid[] = {{3, 0.1}, {10, 0.1}, {25, 0.2},
                                         {50, 0.2}};
  std::uint64_t k = 0;
  for (auto [nn, md] : grid) {
    EmbedParams ep;
    ep.n_neighbors = nn;
    ep.min_dist = md;
    ep.seed = Rng::derive(seed, k++);
    s.scales.emplace_back(ep, ClusterParams{});
  }
  return s;
}

ScaleSchedule ScaleSchedule::from_neighbors(const std::vector<int>& n_neighbors,
                                            double min_dist,
                                            const ClusterParams& cp,
                                            std::uint64_t seed) {
  ScaleSchedule s;
  std::uint64_t k = 0;
  for (int nn : n_neighbors) {
    EmbedParams ep;
    ep.n_neighbors = nn;
    ep.min_dist = min_dist;
    ep.seed = Rng::derive(seed, k++);
    s.scales.emplace_back(ep, cp);
  }
  return s;
}

PseudoLabelMatrix build_pseudolabels(
    const Eigen::Ref<const Eigen::MatrixXd>& X, const ScaleSchedule& schedule,
    std::string dataset_hash,
    const std::function<void(int, const LatentEmbedding&)>& on_embed) {
  schedule.validate();
  PseudoLabelMatrix m;
  m.schedule = schedule;
  m.dataset_hash = std::move(dataset_hash);
  m.labels.resize(X.rows(), schedule.size());
  for (int k = 0; k < schedule.size(); ++k) {
    try {
      const auto& [ep, cp] = schedule.scales[k];
      const LatentEmbedding emb = embed(X, ep);
      if (on_embed) on_embed(k, emb);
      const ClusterLabels cl = cluster(emb.coords, cp);
      m.labels.col(k) = cl.labels;
      ScaleDiagnostics d;
      d.n_clusters = cl.n_clusters();
      d.noise_fraction =
          X.rows() ? double((cl.labels.array() < 0).count()) / double(X.rows())
                   : 0.0;
      m.diagnostics.push_back(d);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("scale " + std::to_string(k) + ": " + e.what());
    }
  }
  return m;
}

std::vector<int> positives(const PseudoLabelMatrix& m, Eigen::Index i, int k) {
  if (i < 0 || i >= m.size() || k < 0 || k >= m.n_scales())
    throw InvalidArgument("positives index out of range");
  std::vector<int> out;
  const int y = m.labels(i, k);
  if (y < 0) return out;
  for (Eigen::Index j = 0; j < m.size(); ++j)
    if (j != i && m.labels(j, k) == y) out.push_back(int(j));
  return out;
}

namespace {

std::uint64_t read_u64(TextReader& r) {
  const auto t = r.text();
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) r.fail("invalid seed");
  return v;
}

}  // namespace

void write_labels(std::ostream& os, const PseudoLabelMatrix& m) {
  TextWriter w(os);
  write_header(w, {"labels", m.dataset_hash, std::int64_t(m.size())});
  w.field("scales").field(m.n_scales());
  w.end_line();
  for (int k = 0; k < m.n_scales(); ++k) {
    const auto& [e, c] = m.schedule.scales[std::size_t(k)];
    const ScaleDiagnostics d =
        std::size_t(k) < m.diagnostics.size() ? m.diagnostics[std::size_t(k)]
                                               : ScaleDiagnostics{};
    w.field("scale").field(e.n_neighbors).field(e.min_dist).field(e.out_dim)
        .field(e.n_epochs).field(e.negative_sample_rate).field(e.spread)
        .field(std::string_view(std::to_string(e.seed)))
        .field(int(e.init)).field(c.min_cluster_size).field(c.min_samples)
        .field(d.n_clusters).field(d.noise_fraction);
    w.end_line();
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    w.field("l");
    for (int k = 0; k < m.n_scales(); ++k) w.field(m.labels(i, k));
    w.end_line();
  }
}

PseudoLabelMatrix read_labels(std::istream& is) {
  TextReader r(is);
  const ContainerHeader h = read_header(r, "labels");
  PseudoLabelMatrix m;
  m.dataset_hash = h.hash;
  r.next("scales");
  const auto K = r.integer();
  r.done();
  if (K < 1 || K > 1000) r.fail("invalid scale count");
  for (std::int64_t k = 0; k < K; ++k) {
    r.next("scale");
    EmbedParams e;
    ClusterParams c;
    ScaleDiagnostics d;
    e.n_neighbors = int(r.integer());
    e.min_dist = r.real();
    e.out_dim = int(r.integer());
    e.n_epochs = int(r.integer());
    e.negative_sample_rate = int(r.integer());
    e.spread = r.real();
    e.seed = read_u64(r);
    const auto init = r.integer();
    if (init != 0 && init != 1) r.fail("invalid init");
    e.init = EmbedInit(init);
    c.min_cluster_size = int(r.integer());
    c.min_samples = int(r.integer());
    d.n_clusters = int(r.integer());
    d.noise_fraction = r.real();
    r.done();
    m.schedule.scales.emplace_back(e, c);
    m.diagnostics.push_back(d);
  }
  if (h.count < 0) r.fail("invalid count");
  m.labels.resize(h.count, K);
  for (std::int64_t i = 0; i < h.count; ++i) {
    r.next("l");
    r.expect_fields(std::size_t(K) + 1);
    for (std::int64_t k = 0; k < K; ++k) {
      const auto v = r.integer();
      if (v < -1) r.fail("invalid label");
      m.labels(i, k) = int(v);
    }
  }
  if (!r.at_end()) {
    r.next();
    r.fail("trailing content after the last record");
  }
  return m;
}

void save_labels(const PseudoLabelMatrix& m, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RuntimeFailure("cannot write " + path);
  write_labels(os, m);
  if (!os) throw RuntimeFailure("write failed: " + path);
}

PseudoLabelMatrix load_labels(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw RuntimeFailure("cannot read " + path);
  return read_labels(is);
}

}  // namespace conmap
