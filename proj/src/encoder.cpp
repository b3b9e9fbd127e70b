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
#include "conmap/encoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace conmap {

namespace {

bool has_relu(int layer) {
  return layer != EncoderModel::kEncoderLayers - 1 &&
         layer != EncoderModel::kLayers - 1;
}

std::vector<std::pair<int, int>> layer_shapes(const EncoderDims& d) {
  return {{d.h, d.n}, {d.h, d.h}, {d.h, d.h},
          {d.d, d.h}, {d.d, d.d}, {d.p, d.d}};
}

void check_dims(const EncoderDims& d) {
  if (d.n < 1 || d.h < 1 || d.d < 1 || d.p < 1)
    throw InvalidArgument("encoder dimensions must be positive");
}

// Activations of every layer for a batch; acts[0] is the input.
struct Trace {
  std::vector<Eigen::MatrixXd> acts;
  std::vector<Eigen::MatrixXd> pre;
};

Trace run(const EncoderModel& m, const Eigen::Ref<const Eigen::MatrixXd>& Q,
          int n_layers) {
  if (Q.rows() != m.dims.n)
    throw InvalidArgument("input has " + std::to_string(Q.rows()) +
                          " joints, model expects " + std::to_string(m.dims.n));
  Trace t;
  t.acts.reserve(n_layers + 1);
  t.acts.emplace_back(Q);
  for (int l = 0; l < n_layers; ++l) {
    const auto& L = m.layers[l];
    Eigen::MatrixXd z = L.W * t.acts.back();
    z.colwise() += L.b;
    t.pre.push_back(z);
    if (has_relu(l)) z = z.cwiseMax(0.0);
    t.acts.push_back(std::move(z));
  }
  return t;
}

}  // namespace

EncoderModel EncoderModel::init(const EncoderDims& dims, std::uint64_t seed) {
  check_dims(dims);
  EncoderModel m;
  m.dims = dims;
  Rng rng(seed);
  for (auto [out, in] : layer_shapes(dims)) {
    const double bound = 1.0 / std::sqrt(double(in));
    DenseLayer L;
    L.W.resize(out, in);
    L.b.resize(out);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) L.W(r, c) = rng.uniform(-bound, bound);
    for (int r = 0; r < out; ++r) L.b(r) = rng.uniform(-bound, bound);
    m.layers.push_back(std::move(L));
  }
  return m;
}

EncoderModel EncoderModel::zeros(const EncoderDims& dims) {
  check_dims(dims);
  EncoderModel m;
  m.dims = dims;
  for (auto [out, in] : layer_shapes(dims))
    m.layers.push_back({Eigen::MatrixXd::Zero(out, in),
                        Eigen::VectorXd::Zero(out)});
  return m;
}

ForwardOutput forward(const EncoderModel& m,
                      const Eigen::Ref<const Eigen::VectorXd>& q) {
  const Trace t = run(m, q, EncoderModel::kLayers);
  return {t.acts[EncoderModel::kEncoderLayers].col(0), t.acts.back().col(0)};
}

Eigen::MatrixXd encode(const EncoderModel& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& Q) {
  return run(m, Q, EncoderModel::kEncoderLayers).acts.back();
}

Eigen::MatrixXd project_head(const EncoderModel& m,
                             const Eigen::Ref<const Eigen::MatrixXd>& Q) {
  return run(m, Q, EncoderModel::kLayers).acts.back();
}

AugmentedSample augment(const SystemSpec& sys,
                        const Eigen::Ref<const Eigen::VectorXd>& q,
                        const Eigen::Ref<const Eigen::MatrixXd>& basis,
                        double sigma, std::uint64_t seed) {
  AugmentedSample out;
  out.q_tilde = q;
  const Eigen::Index m = basis.cols();
  if (m == 0 || sigma == 0.0) return out;
  const double max_move = 3.0 * sigma * std::sqrt(double(m));
  Rng rng(seed);
  for (int attempt = 0; attempt < 5; ++attempt) {
    Eigen::VectorXd u(m);
    for (Eigen::Index k = 0; k < m; ++k) u(k) = rng.uniform(-sigma, sigma);
    const Eigen::VectorXd step = basis * u;
    if (sys.constraint.empty()) {
      const Eigen::VectorXd cand = q + step;
      if (within_limits(sys, cand)) {
        out.q_tilde = cand;
        return out;
      }
      continue;
    }
    ProjectionResult p = project(sys, q + step);
    if (p.ok() && (p.q - q).norm() <= max_move) {
      out.q_tilde = std::move(p.q);
      return out;
    }
  }
  out.degenerate = true;
  return out;
}

AugmentedSample augment(const SystemSpec& sys,
                        const Eigen::Ref<const Eigen::VectorXd>& q,
                        double sigma, std::uint64_t seed) {
  return augment(sys, q, manifold_nullspace(sys, q), sigma, seed);
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& u,
                         const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return u.dot(v) / (nu * nv);
}

double loss_nce(const Eigen::Ref<const Eigen::MatrixXd>& Z,
                const std::vector<std::vector<int>>& positives, double tau,
                Eigen::MatrixXd* grad) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  const Eigen::Index M = Z.cols();
  if (Eigen::Index(positives.size()) > M)
    throw InvalidArgument("more anchors than batch members");
  Eigen::VectorXd norms = Z.colwise().norm().transpose();
  Eigen::MatrixXd Zn(Z.rows(), M);
  for (Eigen::Index j = 0; j < M; ++j)
    Zn.col(j) = norms(j) > 0.0 ? Eigen::VectorXd(Z.col(j) / norms(j))
                               : Eigen::VectorXd::Zero(Z.rows());
  const Eigen::Index A = Eigen::Index(positives.size());
  const Eigen::MatrixXd S = Zn.leftCols(A).transpose() * Zn;  // A x M

  // Exponents are shifted by the largest possible similarity, which
  // cancels in the ratio.
  Eigen::MatrixXd C;
  if (grad) C.setZero(M, M);
  double loss = 0.0;
  Eigen::VectorXd e(M);
  for (Eigen::Index i = 0; i < A; ++i) {
    if (positives[i].empty()) continue;
    double den = 0.0;
    for (Eigen::Index j = 0; j < M; ++j) {
      e(j) = j == i ? 0.0 : std::exp((S(i, j) - 1.0) / tau);
      den += e(j);
    }
    double num = 0.0;
    for (int j : positives[i]) {
      if (j < 0 || j >= M || j == i)
        throw InvalidArgument("invalid positive index");
      num += e(j);
    }
    loss -= std::log(num / den);
    if (grad) {
      for (Eigen::Index j = 0; j < M; ++j)
        if (j != i) C(i, j) = e(j) / (den * tau);
      for (int j : positives[i]) C(i, j) -= e(j) / (num * tau);
    }
  }
  if (grad) {
    const Eigen::MatrixXd dZn = Zn * (C + C.transpose());
    grad->resize(Z.rows(), M);
    for (Eigen::Index j = 0; j < M; ++j) {
      if (norms(j) == 0.0) {
        grad->col(j).setZero();
        continue;
      }
      const Eigen::VectorXd zn = Zn.col(j);
      grad->col(j) = (dZn.col(j) - zn * zn.dot(dZn.col(j))) / norms(j);
    }
  }
  return loss;
}

std::vector<std::vector<int>> batch_positives(
    const Eigen::Ref<const Eigen::VectorXi>& labels) {
  const int B = int(labels.size());
  std::vector<std::vector<int>> pos(B);
  // Augmentations inherit the label of their source.
  for (int i = 0; i < B; ++i) {
    if (labels(i) < 0) {
      pos[i].push_back(B + i);
      continue;
    }
    for (int j = 0; j < B; ++j)
      if (j != i && labels(j) == labels(i)) pos[i].push_back(j);
    for (int j = 0; j < B; ++j)
      if (labels(j) == labels(i)) pos[i].push_back(B + j);
  }
  return pos;
}

double multiscale_loss(const EncoderModel& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& X,
                       const Eigen::Ref<const Eigen::MatrixXd>& X_aug,
                       const Eigen::Ref<const Eigen::MatrixXi>& labels,
                       const std::vector<double>& lambdas, double tau,
                       ModelGradient* grad) {
  const Eigen::Index B = X.cols();
  if (X_aug.cols() != B || labels.rows() != B ||
      labels.cols() != Eigen::Index(lambdas.size()))
    throw InvalidArgument("batch shapes disagree");
  Eigen::MatrixXd Q(X.rows(), 2 * B);
  Q << X, X_aug;
  const Trace t = run(m, Q, EncoderModel::kLayers);
  const Eigen::MatrixXd& Z = t.acts.back();

  double loss = 0.0;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Z.rows(), Z.cols());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (lambdas[k] == 0.0) continue;
    Eigen::MatrixXd Gk;
    const double lk = loss_nce(Z, batch_positives(labels.col(Eigen::Index(k))),
                               tau, grad ? &Gk : nullptr);
    loss += lambdas[k] * lk;
    if (grad) G += lambdas[k] * Gk;
  }
  if (grad) {
    grad->layers.resize(EncoderModel::kLayers);
    Eigen::MatrixXd delta = G;
    for (int l = EncoderModel::kLayers - 1; l >= 0; --l) {
      if (has_relu(l))
        delta = delta.cwiseProduct(
            (t.pre[l].array() > 0.0).cast<double>().matrix());
      grad->layers[l].W = delta * t.acts[l].transpose();
      grad->layers[l].b = delta.rowwise().sum();
      if (l > 0) delta = m.layers[l].W.transpose() * delta;
    }
  }
  return loss;
}

void TrainConfig::validate(int n_scales) const {
  if (!(lr > 0.0)) throw InvalidArgument("lr must be positive");
  if (batch_size < 2) throw InvalidArgument("batch_size must be at least 2");
  if (epochs < 1) throw InvalidArgument("epochs must be positive");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (aug_sigma < 0.0) throw InvalidArgument("aug_sigma must be >= 0");
  if (!lambdas.empty()) {
    if (int(lambdas.size()) != n_scales)
      throw InvalidArgument("need one lambda per scale");
    double sum = 0.0;
    for (double l : lambdas) {
      if (l < 0.0) throw InvalidArgument("lambdas must be nonnegative");
      sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InvalidArgument("lambdas must sum to 1");
  }
}

Adam::Adam(const EncoderModel& shape, double lr, double beta1, double beta2,
           double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const auto& L : shape.layers) {
    m1_.push_back({Eigen::MatrixXd::Zero(L.W.rows(), L.W.cols()),
                   Eigen::VectorXd::Zero(L.b.size())});
  }
  m2_ = m1_;
}

void Adam::step(EncoderModel& m, const ModelGradient& g) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, double(t_));
  const double c2 = 1.0 - std::pow(beta2_, double(t_));
  auto update = [&](auto& param, const auto& grad, auto& s1, auto& s2) {
    s1 = beta1_ * s1 + (1.0 - beta1_) * grad;
    s2 = beta2_ * s2 + (1.0 - beta2_) * grad.cwiseProduct(grad);
    param.array() -= lr_ * (s1.array() / c1) /
                     ((s2.array() / c2).sqrt() + eps_);
  };
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    update(m.layers[l].W, g.layers[l].W, m1_[l].W, m2_[l].W);
    update(m.layers[l].b, g.layers[l].b, m1_[l].b, m2_[l].b);
  }
}

TrainResult train(const ConfigDataset& ds, const PseudoLabelMatrix& labels,
                  const TrainConfig& cfg) {
  cfg.validate(labels.n_scales());
  if (labels.dataset_hash != ds.hash())
    throw HashMismatch("labels were built for dataset " + labels.dataset_hash +
                       ", not " + ds.hash());
  const std::vector<int> idx = ds.training_indices();
  const int N = int(idx.size());
  if (labels.size() != N)
    throw HashMismatch("label rows do not match the training set size");
  if (N < 2) throw InvalidArgument("need at least two training samples");
  const int K = labels.n_scales();
  std::vector<double> lambdas = cfg.lambdas;
  if (lambdas.empty()) lambdas.assign(K, 1.0 / double(K));

  EncoderDims dims = cfg.dims;
  dims.n = ds.system.dof();
  TrainResult out;
  out.model = EncoderModel::init(dims, Rng::derive(cfg.seed, 0));
  Adam adam(out.model, cfg.lr);
  const int B = std::min(cfg.batch_size, N);

  std::vector<int> order(N);
  for (int e = 0; e < cfg.epochs; ++e) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::derive(cfg.seed, 1 + std::uint64_t(e)));
    for (int k = N - 1; k > 0; --k)
      std::swap(order[k], order[rng.uniform_index(std::uint64_t(k) + 1)]);
    const std::uint64_t aug_seed = Rng::derive(~cfg.seed, std::uint64_t(e));
    double epoch_loss = 0.0;
    int n_batches = 0;
    for (int start = 0; start + 1 < N; start += B) {
      const int b = std::min(B, N - start);
      if (b < 2) break;
      Eigen::MatrixXd X(dims.n, b), Xa(dims.n, b);
      Eigen::MatrixXi Y(b, K);
      for (int r = 0; r < b; ++r) {
        const int i = order[start + r];
        const ConfigRecord& rec = ds.records[idx[i]];
        X.col(r) = rec.q;
        const AugmentedSample a =
            augment(ds.system, rec.q, rec.nullspace, cfg.aug_sigma,
                    Rng::derive(aug_seed, std::uint64_t(i)));
        out.degenerate_augmentations += a.degenerate;
        Xa.col(r) = a.q_tilde;
        Y.row(r) = labels.labels.row(i);
      }
      ModelGradient g;
      epoch_loss += multiscale_loss(out.model, X, Xa, Y, lambdas, cfg.tau, &g);
      ++n_batches;
      adam.step(out.model, g);
    }
    out.loss_history.push_back(epoch_loss / double(std::max(1, n_batches)));
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'C', 'M', 'E', 'M'};
constexpr std::uint32_t kModelVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) buf.push_back(char((v >> (8 * k)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) buf.push_back(char((v >> (8 * k)) & 0xff));
}

std::uint32_t get_u32(const std::string& buf, std::size_t& at) {
  if (at + 4 > buf.size()) throw ModelFormatError("model file truncated");
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k)
    v |= std::uint32_t(static_cast<unsigned char>(buf[at + k])) << (8 * k);
  at += 4;
  return v;
}

std::uint64_t get_u64(const std::string& buf, std::size_t& at) {
  if (at + 8 > buf.size()) throw ModelFormatError("model file truncated");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k)
    v |= std::uint64_t(static_cast<unsigned char>(buf[at + k])) << (8 * k);
  at += 8;
  return v;
}

}  // namespace

void write_model(std::ostream& os, const EncoderModel& m) {
  std::string buf(kMagic, 4);
  put_u32(buf, kModelVersion);
  for (int v : {m.dims.n, m.dims.h, m.dims.d, m.dims.p})
    put_u32(buf, std::uint32_t(v));
  for (const auto& L : m.layers) {
    for (Eigen::Index r = 0; r < L.W.rows(); ++r)
      for (Eigen::Index c = 0; c < L.W.cols(); ++c)
        put_u64(buf, std::bit_cast<std::uint64_t>(L.W(r, c)));
    for (Eigen::Index r = 0; r < L.b.size(); ++r)
      put_u64(buf, std::bit_cast<std::uint64_t>(L.b(r)));
  }
  Fnv1a h;
  h.update(buf.data(), buf.size());
  put_u64(buf, h.digest());
  os.write(buf.data(), std::streamsize(buf.size()));
}

EncoderModel read_model(std::istream& is) {
  const std::string buf((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw ModelFormatError("not a model file");
  std::size_t at = 4;
  const std::uint32_t version = get_u32(buf, at);
  if (version != kModelVersion)
    throw ModelFormatError("unsupported model version " +
                           std::to_string(version));
  EncoderDims dims;
  dims.n = int(get_u32(buf, at));
  dims.h = int(get_u32(buf, at));
  dims.d = int(get_u32(buf, at));
  dims.p = int(get_u32(buf, at));
  if (dims.n < 1 || dims.h < 1 || dims.d < 1 || dims.p < 1 ||
      dims.n > 100000 || dims.h > 100000 || dims.d > 100000 || dims.p > 100000)
    throw ModelFormatError("invalid model dimensions");
  std::size_t expected = at + 8;
  for (auto [out, in] : layer_shapes(dims))
    expected += 8 * std::size_t(out) * std::size_t(in + 1);
  if (buf.size() != expected)
    throw ModelFormatError("model size " + std::to_string(buf.size()) +
                           " does not match its dimensions (" +
                           std::to_string(expected) + ")");
  EncoderModel m = EncoderModel::zeros(dims);
  for (auto& L : m.layers) {
    for (Eigen::Index r = 0; r < L.W.rows(); ++r)
      for (Eigen::Index c = 0; c < L.W.cols(); ++c)
        L.W(r, c) = std::bit_cast<double>(get_u64(buf, at));
    for (Eigen::Index r = 0; r < L.b.size(); ++r)
      L.b(r) = std::bit_cast<double>(get_u64(buf, at));
    if (!L.W.allFinite() || !L.b.allFinite())
      throw ModelFormatError("non-finite weights");
  }
  Fnv1a h;
  h.update(buf.data(), at);
  if (get_u64(buf, at) != h.digest())
    throw ModelFormatError("model checksum mismatch");
  return m;
}

void save_model(const EncoderModel& m, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RuntimeFailure("cannot write " + path);
  write_model(os, m);
  if (!os) throw RuntimeFailure("write failed: " + path);
}

EncoderModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw RuntimeFailure("cannot read " + path);
  return read_model(is);
}

}  // namespace conmap
