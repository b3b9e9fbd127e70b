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
#ifndef CONMAP_COMMON_HPP_
#define CONMAP_COMMON_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conmap {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Row-major dense matrix; one configuration or point per row.
template <typename Scalar>
using RowMatrixX =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Joint angles of the full multi-chain system, in radians.
using JointConfig = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar theta) {
  using std::ceil;
  const Scalar two_pi = Scalar(2) * Scalar(kPi);
  Scalar wrapped = theta - two_pi * ceil((theta - Scalar(kPi)) / two_pi);
  if (wrapped <= -Scalar(kPi)) wrapped += two_pi;
  return wrapped;
}

/// 64-bit Mersenne Twister with portable distributions.
///
/// The standard library's distributions are implementation-defined, so all
/// sampling in the toolkit goes through this type to stay bit-reproducible
/// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via Box-Muller.
  double normal();

  /// Derives an independent stream for a sub-task (pose, scene, scale...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

/// FNV-1a over raw bytes, used as an integrity token in file headers.
class Fnv1a {
 public:
  void update(const void* data, std::size_t size);
  void update(double value);
  void update(std::uint64_t value);
  void update(const std::string& text) { update(text.data(), text.size()); }
  template <typename Derived>
  void update(const Eigen::DenseBase<Derived>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) update(double(m(r, c)));
  }
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = 14695981039346656037ull;
};

std::string to_hex(std::uint64_t value);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Strict parse of a full string as a double; throws InvalidArgument.
double parse_double(std::string_view text);

}  // namespace conmap

#endif  // CONMAP_COMMON_HPP_
