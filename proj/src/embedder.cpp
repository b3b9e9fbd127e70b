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
#include "conmap/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include <Eigen/SparseCholesky>

#include "conmap/common.hpp"

namespace conmap {

void EmbedParams::validate(Eigen::Index n_points) const {
  if (n_neighbors < 2 || n_neighbors >= n_points)
    throw InvalidArgument("n_neighbors must satisfy 2 <= n_neighbors < N");
  if (!(min_dist >= 0.0 && min_dist < 1.0))
    throw InvalidArgument("min_dist must lie in [0, 1)");
  if (out_dim != 2 && out_dim != 3)
    throw InvalidArgument("out_dim must be 2 or 3");
  if (n_epochs < 1) throw InvalidArgument("n_epochs must be positive");
}

KnnGraph knn_graph(const Eigen::Ref<const Eigen::MatrixXd>& X, int k) {
  const Eigen::Index n = X.rows();
  if (k < 1 || k >= n)
    throw InvalidArgument("knn_graph needs 1 <= k < N (k = " +
                          std::to_string(k) + ", N = " + std::to_string(n) +
                          ")");
  // Points as contiguous columns.
  const Eigen::MatrixXd P = X.transpose();
  KnnGraph g;
  g.indices.resize(n, k);
  g.distances.resize(n, k);
  std::vector<std::pair<double, int>> row(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index r = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      row[r++] = {(P.col(i) - P.col(j)).norm(), int(j)};
    }
    std::partial_sort(row.begin(), row.begin() + k, row.end());
    for (int c = 0; c < k; ++c) {
      g.distances(i, c) = row[c].first;
      g.indices(i, c) = row[c].second;
    }
  }
  return g;
}

CurveParams fit_curve_params(double min_dist, double spread) {
  constexpr int kPoints = 300;
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(kPoints, 0.0, 3.0 * spread);
  Eigen::ArrayXd y(kPoints);
  for (int i = 0; i < kPoints; ++i)
    y(i) = x(i) < min_dist ? 1.0 : std::exp(-(x(i) - min_dist) / spread);

  // Levenberg-Marquardt on r(a, b) = 1 / (1 + a x^(2b)) - y.
  double a = 1.0, b = 1.0, mu = 1e-3;
  auto residuals = [&](double aa, double bb, Eigen::ArrayXd& r,
                       Eigen::MatrixX2d* J) {
    r.resize(kPoints);
    if (J) J->resize(kPoints, 2);
    for (int i = 0; i < kPoints; ++i) {
      const double xp = x(i) > 0.0 ? std::pow(x(i), 2.0 * bb) : 0.0;
      const double den = 1.0 + aa * xp;
      r(i) = 1.0 / den - y(i);
      if (J) {
        const double g = -1.0 / (den * den);
        (*J)(i, 0) = g * xp;
        (*J)(i, 1) = x(i) > 0.0 ? g * aa * xp * 2.0 * std::log(x(i)) : 0.0;
      }
    }
  };
  Eigen::ArrayXd r;
  Eigen::MatrixX2d J;
  residuals(a, b, r, &J);
  double cost = r.square().sum();
  for (int it = 0; it < 500; ++it) {
    const Eigen::Matrix2d H = J.transpose() * J;
    const Eigen::Vector2d g = J.transpose() * r.matrix();
    Eigen::Matrix2d A = H;
    A.diagonal() += mu * H.diagonal();
    const Eigen::Vector2d step = A.ldlt().solve(-g);
    Eigen::ArrayXd r_new;
    residuals(a + step(0), b + step(1), r_new, nullptr);
    const double cost_new = r_new.square().sum();
    if (cost_new < cost) {
      a += step(0);
      b += step(1);
      const bool done = cost - cost_new < 1e-16 * (1.0 + cost);
      cost = cost_new;
      residuals(a, b, r, &J);
      mu = std::max(mu / 3.0, 1e-12);
      if (done && step.norm() < 1e-12) break;
    } else {
      mu *= 4.0;
      if (mu > 1e12) break;
    }
  }
  return {a, b};
}

FuzzyGraph fuzzy_simplicial_set(const KnnGraph& knn) {
  const Eigen::Index n = knn.size();
  const int k = int(knn.k());
  const double target = std::log2(double(k));
  const double mean_all = knn.distances.mean();

  // Directed memberships, keyed by (i, j) with i < j for the union.
  std::map<std::pair<int, int>, std::pair<double, double>> pairs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto d = knn.distances.row(i);
    double rho = 0.0;
    for (int c = 0; c < k; ++c)
      if (d(c) > 0.0) {
        rho = d(c);
        break;
      }
    double lo = 0.0, hi = std::numeric_limits<double>::infinity(), mid = 1.0;
    for (int it = 0; it < 64; ++it) {
      double psum = 0.0;
      for (int c = 0; c < k; ++c) {
        const double excess = d(c) - rho;
        psum += excess > 0.0 ? std::exp(-excess / mid) : 1.0;
      }
      if (std::abs(psum - target) < 1e-5) break;
      if (psum > target) {
        hi = mid;
        mid = 0.5 * (lo + hi);
      } else {
        lo = mid;
        mid = std::isinf(hi) ? mid * 2.0 : 0.5 * (lo + hi);
      }
    }
    double sigma = mid;
    const double mean_i = d.mean();
    if (rho > 0.0)
      sigma = std::max(sigma, 1e-3 * mean_i);
    else
      sigma = std::max(sigma, 1e-3 * mean_all);

    for (int c = 0; c < k; ++c) {
      const int j = knn.indices(i, c);
      const double excess = d(c) - rho;
      double w = excess <= 0.0 || sigma == 0.0 ? 1.0 : std::exp(-excess / sigma);
      const int lo = std::min(int(i), j), hi_idx = std::max(int(i), j);
      auto& slot = pairs.try_emplace({lo, hi_idx}, 0.0, 0.0).first->second;
      if (int(i) == lo)
        slot.first = w;
      else
        slot.second = w;
    }
  }

  FuzzyGraph g;
  for (const auto& [key, w] : pairs) {
    const double sym = w.first + w.second - w.first * w.second;
    if (sym <= 0.0) continue;
    g.head.push_back(key.first);
    g.tail.push_back(key.second);
    g.weight.push_back(sym);
    g.head.push_back(key.second);
    g.tail.push_back(key.first);
    g.weight.push_back(sym);
  }
  return g;
}

namespace {

double clip(double v) { return std::clamp(v, -4.0, 4.0); }

void optimize_layout(Eigen::MatrixXd& emb, const FuzzyGraph& graph,
                     const CurveParams& ab, const EmbedParams& p, Rng& rng) {
  const int n_epochs = p.n_epochs;
  const Eigen::Index n_vertices = emb.cols();
  const int dim = int(emb.rows());
  const double max_w =
      *std::max_element(graph.weight.begin(), graph.weight.end());

  std::vector<int> head, tail;
  std::vector<double> eps;
  for (std::size_t e = 0; e < graph.weight.size(); ++e) {
    if (graph.weight[e] < max_w / double(n_epochs)) continue;
    head.push_back(graph.head[e]);
    tail.push_back(graph.tail[e]);
    eps.push_back(max_w / graph.weight[e]);
  }
  const std::size_t n_edges = eps.size();
  std::vector<double> eps_neg(n_edges), next_sample(eps), next_neg(n_edges);
  for (std::size_t e = 0; e < n_edges; ++e) {
    eps_neg[e] = eps[e] / double(p.negative_sample_rate);
    next_neg[e] = eps_neg[e];
  }

  const double a = ab.a, b = ab.b;
  for (int epoch = 0; epoch < n_epochs; ++epoch) {
    const double alpha = 1.0 - double(epoch) / double(n_epochs);
    for (std::size_t e = 0; e < n_edges; ++e) {
      if (next_sample[e] > double(epoch)) continue;
      const int j = head[e], k = tail[e];
      auto current = emb.col(j);
      auto other = emb.col(k);
      const double d2 = (current - other).squaredNorm();
      double coeff = 0.0;
      if (d2 > 0.0)
        coeff = -2.0 * a * b * std::pow(d2, b - 1.0) /
                (a * std::pow(d2, b) + 1.0);
      for (int d = 0; d < dim; ++d) {
        const double g = clip(coeff * (current(d) - other(d)));
        current(d) += g * alpha;
        other(d) -= g * alpha;
      }
      next_sample[e] += eps[e];

      const int n_neg = int((double(epoch) - next_neg[e]) / eps_neg[e]);
      for (int s = 0; s < n_neg; ++s) {
        const int kk = int(rng.uniform_index(std::uint64_t(n_vertices)));
        if (kk == j) continue;
        auto neg = emb.col(kk);
        const double nd2 = (current - neg).squaredNorm();
        if (nd2 <= 0.0) continue;
        const double rc =
            2.0 * b / ((0.001 + nd2) * (a * std::pow(nd2, b) + 1.0));
        for (int d = 0; d < dim; ++d)
          current(d) += clip(rc * (current(d) - neg(d))) * alpha;
      }
      next_neg[e] += double(n_neg) * eps_neg[e];
    }
  }
}

/// Leading non-trivial eigenvectors of L = I - D^-1/2 A D^-1/2 for one
/// connected component, by inverse subspace iteration on a shifted sparse
/// Cholesky factor. Returns an empty matrix when the factorisation fails.
Eigen::MatrixXd component_spectral(const std::vector<int>& members,
                                   const FuzzyGraph& graph,
                                   const std::vector<int>& local, int dim,
                                   Rng& rng) {
  const int n = int(members.size());
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < graph.weight.size(); ++e) {
    const int a = local[graph.head[e]];
    if (a < 0) continue;
    degree(a) += graph.weight[e];
  }
  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  for (std::size_t e = 0; e < graph.weight.size(); ++e) {
    const int a = local[graph.head[e]], b = local[graph.tail[e]];
    if (a < 0) continue;
    trip.emplace_back(a, b, -graph.weight[e] * inv_sqrt(a) * inv_sqrt(b));
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  L += I;

  constexpr double kShift = 1e-3;
  const Eigen::SparseMatrix<double> shifted = L + kShift * I;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) return {};

  const int p = std::min(n, dim + 4);
  Eigen::MatrixXd V(n, p);
  for (int c = 0; c < p; ++c)
    for (int r = 0; r < n; ++r) V(r, c) = rng.normal();
  auto orthonormal = [](const Eigen::MatrixXd& M) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    return Eigen::MatrixXd(qr.householderQ() *
                           Eigen::MatrixXd::Identity(M.rows(), M.cols()));
  };
  V = orthonormal(V);
  for (int it = 0; it < 40; ++it) {
    V = solver.solve(V);
    if (solver.info() != Eigen::Success) return {};
    V = orthonormal(V);
  }
  // Rayleigh-Ritz; the smallest pair is the trivial D^1/2 1 direction.
  const Eigen::MatrixXd T = V.transpose() * (L * V);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()));
  return V * es.eigenvectors().middleCols(1, dim);
}

/// Spectral initial layout (dim x m), components placed around the
/// principal directions of their input-space centroids.
Eigen::MatrixXd spectral_layout(const Eigen::MatrixXd& U, const FuzzyGraph& graph,
                                int dim, Rng& rng) {
  const int m = int(U.rows());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < graph.weight.size(); ++e)
    parent[find(graph.head[e])] = find(graph.tail[e]);
  std::map<int, std::vector<int>> by_root;
  for (int i = 0; i < m; ++i) by_root[find(i)].push_back(i);
  std::vector<std::vector<int>> comps;
  for (auto& [root, members] : by_root) comps.push_back(std::move(members));
  std::sort(comps.begin(), comps.end());  // by smallest member

  const int nc = int(comps.size());
  Eigen::MatrixXd meta = Eigen::MatrixXd::Zero(dim, nc);
  double half_width = 1.0;
  if (nc > 1) {
    Eigen::MatrixXd centroids(nc, U.cols());
    for (int c = 0; c < nc; ++c) {
      centroids.row(c).setZero();
      for (int i : comps[c]) centroids.row(c) += U.row(i);
      centroids.row(c) /= double(comps[c].size());
    }
    const Eigen::MatrixXd centred = centroids.rowwise() - centroids.colwise().mean();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    const int r = std::min<int>(dim, int(svd.matrixV().cols()));
    meta.topRows(r) = (centred * svd.matrixV().leftCols(r)).transpose();
    const double scale = meta.cwiseAbs().maxCoeff();
    if (scale > 0.0) meta /= scale;
    double nearest = std::numeric_limits<double>::infinity();
    for (int a = 0; a < nc; ++a)
      for (int b = a + 1; b < nc; ++b)
        nearest = std::min(nearest, (meta.col(a) - meta.col(b)).norm());
    half_width = std::isfinite(nearest) && nearest > 0.0 ? 0.5 * nearest : 1.0 / nc;
  }

  Eigen::MatrixXd emb(dim, m);
  std::vector<int> local(m, -1);
  for (int c = 0; c < nc; ++c) {
    const auto& members = comps[c];
    Eigen::MatrixXd block;
    if (int(members.size()) > dim + 2) {
      for (int r = 0; r < int(members.size()); ++r) local[members[r]] = r;
      block = component_spectral(members, graph, local, dim, rng);
      for (int i : members) local[i] = -1;
    }
    for (int r = 0; r < int(members.size()); ++r) {
      Eigen::VectorXd x(dim);
      if (block.size() > 0) {
        x = block.row(r).transpose() / block.cwiseAbs().maxCoeff();
      } else {
        for (int d = 0; d < dim; ++d) x(d) = rng.uniform(-1.0, 1.0);
      }
      emb.col(members[r]) = meta.col(c) + half_width * x;
    }
  }

  // Scale to [-10, 10], jitter and rescale each axis to [0, 10].
  emb *= 10.0 / std::max(emb.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index c = 0; c < emb.cols(); ++c)
    for (int d = 0; d < dim; ++d) emb(d, c) += 1e-4 * rng.normal();
  for (int d = 0; d < dim; ++d) {
    const double lo = emb.row(d).minCoeff(), hi = emb.row(d).maxCoeff();
    if (hi > lo) emb.row(d) = (10.0 * (emb.row(d).array() - lo) / (hi - lo)).matrix();
  }
  return emb;
}

}  // namespace

LatentEmbedding embed(const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const EmbedParams& params) {
  const Eigen::Index n = X.rows();
  params.validate(n);
  LatentEmbedding out;
  out.params = params;
  out.coords.setZero(n, params.out_dim);

  // Collapse exact duplicates; they share the layout of their first copy.
  std::vector<int> unique_of(n);
  std::vector<Eigen::Index> unique_rows;
  {
    std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> buckets;
    for (Eigen::Index i = 0; i < n; ++i) {
      Fnv1a h;
      h.update(X.row(i));
      auto& bucket = buckets[h.digest()];
      int found = -1;
      for (Eigen::Index r : bucket)
        if (X.row(r) == X.row(i)) {
          found = unique_of[r];
          break;
        }
      if (found < 0) {
        found = int(unique_rows.size());
        unique_rows.push_back(i);
        bucket.push_back(i);
      }
      unique_of[i] = found;
    }
  }
  const Eigen::Index m = Eigen::Index(unique_rows.size());
  if (m < 3) return out;

  Eigen::MatrixXd U(m, X.cols());
  for (Eigen::Index r = 0; r < m; ++r) U.row(r) = X.row(unique_rows[r]);
  const int k = int(std::min<Eigen::Index>(params.n_neighbors, m - 1));
  const FuzzyGraph graph = fuzzy_simplicial_set(knn_graph(U, k));
  const CurveParams ab = fit_curve_params(params.min_dist, params.spread);

  Rng rng(params.seed);
  Eigen::MatrixXd emb;
  if (params.init == EmbedInit::kSpectral && !graph.weight.empty()) {
    emb = spectral_layout(U, graph, params.out_dim, rng);
  } else {
    emb.resize(params.out_dim, m);
    for (Eigen::Index c = 0; c < m; ++c)
      for (int d = 0; d < params.out_dim; ++d) emb(d, c) = rng.uniform(-10.0, 10.0);
  }
  if (!graph.weight.empty()) optimize_layout(emb, graph, ab, params, rng);

  for (Eigen::Index i = 0; i < n; ++i)
    out.coords.row(i) = emb.col(unique_of[i]).transpose();
  return out;
}

double neighborhood_jaccard(const Eigen::Ref<const Eigen::MatrixXd>& A,
                            const Eigen::Ref<const Eigen::MatrixXd>& B, int k) {
  const KnnGraph ga = knn_graph(A, k), gb = knn_graph(B, k);
  double total = 0.0;
  for (Eigen::Index i = 0; i < ga.size(); ++i) {
    std::vector<int> a(ga.indices.row(i).begin(), ga.indices.row(i).end());
    std::vector<int> b(gb.indices.row(i).begin(), gb.indices.row(i).end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    total += double(common.size()) / double(2 * k - common.size());
  }
  return total / double(ga.size());
}

}  // namespace conmap
