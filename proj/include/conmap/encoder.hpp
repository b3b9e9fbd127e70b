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
#ifndef CONMAP_ENCODER_HPP_
#define CONMAP_ENCODER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "conmap/dataset.hpp"
#include "conmap/pseudolabels.hpp"

namespace conmap {

struct DenseLayer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;

  bool operator==(const DenseLayer&) const = default;
};

struct EncoderDims {
  int n = 0;   // input joints
  int h = 64;  // hidden width
  int d = 32;  // feature
  int p = 16;  // projection

  bool operator==(const EncoderDims&) const = default;
};

/// Feature map n -> h -> h -> h -> d (ReLU between layers) followed by the
/// projection head d -> d -> p (ReLU between its two layers).
struct EncoderModel {
  static constexpr int kEncoderLayers = 4;
  static constexpr int kLayers = 6;

  EncoderDims dims;
  std::vector<DenseLayer> layers;

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases.
  static EncoderModel init(const EncoderDims& dims, std::uint64_t seed);
  /// All weights and biases zero.
  static EncoderModel zeros(const EncoderDims& dims);

  bool operator==(const EncoderModel&) const = default;
};

struct ForwardOutput {
  Eigen::VectorXd feature;
  Eigen::VectorXd projection;
};

ForwardOutput forward(const EncoderModel& m,
                      const Eigen::Ref<const Eigen::VectorXd>& q);
/// Features of the columns of Q (n x B), returned d x B.
Eigen::MatrixXd encode(const EncoderModel& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& Q);
/// Projections of the columns of Q, returned p x B.
Eigen::MatrixXd project_head(const EncoderModel& m,
                             const Eigen::Ref<const Eigen::MatrixXd>& Q);

struct AugmentedSample {
  int source_index = -1;
  JointConfig q_tilde;
  bool degenerate = false;  // every attempt failed; q_tilde == q
};

/// Random step B u with u uniform in [-sigma, sigma]^m, then re-projected.
/// Up to 5 fresh draws are tried before falling back to q itself.
AugmentedSample augment(const SystemSpec& sys,
                        const Eigen::Ref<const Eigen::VectorXd>& q,
                        const Eigen::Ref<const Eigen::MatrixXd>& basis,
                        double sigma, std::uint64_t seed);
AugmentedSample augment(const SystemSpec& sys,
                        const Eigen::Ref<const Eigen::VectorXd>& q,
                        double sigma, std::uint64_t seed);

/// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& u,
                         const Eigen::Ref<const Eigen::VectorXd>& v);

/// Contrastive loss over the columns of Z (p x M). Anchor i uses the
/// indices in positives[i] as numerator terms and every j != i as the
/// denominator. Anchors with no positives are skipped. The loss is summed
/// over anchors. When grad is given it receives dLoss/dZ.
double loss_nce(const Eigen::Ref<const Eigen::MatrixXd>& Z,
                const std::vector<std::vector<int>>& positives, double tau,
                Eigen::MatrixXd* grad = nullptr);

/// Positive sets for a batch laid out as B originals then their B
/// augmentations: every other same-label member of either half, the anchor's
/// own augmentation included. Noise (label < 0) keeps only the augmentation.
std::vector<std::vector<int>> batch_positives(
    const Eigen::Ref<const Eigen::VectorXi>& labels);

struct ModelGradient {
  std::vector<DenseLayer> layers;
};

/// Weighted multi-scale loss on one batch. X and X_aug are n x B, labels is
/// B x K and lambdas has K entries.
double multiscale_loss(const EncoderModel& m,
                       const Eigen::Ref<const Eigen::MatrixXd>& X,
                       const Eigen::Ref<const Eigen::MatrixXd>& X_aug,
                       const Eigen::Ref<const Eigen::MatrixXi>& labels,
                       const std::vector<double>& lambdas, double tau,
                       ModelGradient* grad = nullptr);

struct TrainConfig {
  double lr = 1e-4;
  int batch_size = 1024;
  int epochs = 5000;
  double tau = 0.5;
  std::vector<double> lambdas;  // empty: uniform over scales
  double aug_sigma = 0.05;
  EncoderDims dims;             // n is taken from the dataset
  std::uint64_t seed = 0;

  void validate(int n_scales) const;
};

class Adam {
 public:
  Adam(const EncoderModel& shape, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);
  void step(EncoderModel& m, const ModelGradient& g);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<DenseLayer> m1_, m2_;
};

struct TrainResult {
  EncoderModel model;
  std::vector<double> loss_history;  // mean batch loss per epoch
  int degenerate_augmentations = 0;
};

class HashMismatch : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

/// Trains on the collision-free records; label rows follow
/// ConfigDataset::training_indices().
TrainResult train(const ConfigDataset& ds, const PseudoLabelMatrix& labels,
                  const TrainConfig& cfg);

void save_model(const EncoderModel& m, const std::string& path);
EncoderModel load_model(const std::string& path);
void write_model(std::ostream& os, const EncoderModel& m);
EncoderModel read_model(std::istream& is);

class ModelFormatError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace conmap

#endif  // CONMAP_ENCODER_HPP_
