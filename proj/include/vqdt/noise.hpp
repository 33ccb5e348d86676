// Copyright 2026 The vqdt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace vqdt {

/// Deterministic random stream. mt19937_64 output is fully specified by the
/// standard and the uniform/normal draws below avoid the
/// implementation-defined std distributions, so a seed pins the exact
/// sequence of results everywhere in this project.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// uniform double in [0, 1) with 53 random bits
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  int rademacher() { return (eng_() & 1) ? 1 : -1; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 step; used to derive independent sub-seeds from one base seed
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Classical readout noise applied to measured bitstrings. Either a product
 * channel given by per-qubit flip probabilities (p01[q] = P(read 1 | true 0),
 * p10[q] = P(read 0 | true 1)) or a full column-stochastic map over
 * bitstrings. Product mode is the usual case; the full map exists so a
 * calibrated confusion matrix can itself act as a channel.
 */
struct ReadoutChannel {
  int n = 0;
  std::vector<double> p01;
  std::vector<double> p10;
  std::vector<double> full;  // 2^n x 2^n column-major; empty = product mode

  static ReadoutChannel uniform_flip(int n, double p) {
    ReadoutChannel c;
    c.n = n;
    c.p01.assign(static_cast<size_t>(n), p);
    c.p10.assign(static_cast<size_t>(n), p);
    return c;
  }

  static ReadoutChannel per_qubit(std::vector<double> p01,
                                  std::vector<double> p10) {
    if (p01.size() != p10.size()) {
      throw std::invalid_argument("ReadoutChannel: p01/p10 size mismatch");
    }
    ReadoutChannel c;
    c.n = static_cast<int>(p01.size());
    c.p01 = std::move(p01);
    c.p10 = std::move(p10);
    return c;
  }

  static ReadoutChannel from_matrix(int n, std::vector<double> column_major) {
    const size_t dim = size_t{1} << n;
    if (column_major.size() != dim * dim) {
      throw std::invalid_argument("ReadoutChannel: matrix size mismatch");
    }
    ReadoutChannel c;
    c.n = n;
    c.full = std::move(column_major);
    return c;
  }

  bool is_product() const { return full.empty(); }

  /// Send one measured bitstring through the channel.
  std::uint64_t flip(std::uint64_t bits, Rng& rng) const {
    if (is_product()) {
      std::uint64_t out = bits;
      for (int q = 0; q < n; ++q) {
        const bool one = (bits >> q) & 1;
        const double p = one ? p10[static_cast<size_t>(q)]
                             : p01[static_cast<size_t>(q)];
        if (p > 0.0 && rng.uniform() < p) {
          out ^= std::uint64_t{1} << q;
        }
      }
      return out;
    }
    const size_t dim = size_t{1} << n;
    const double u = rng.uniform();
    double acc = 0.0;
    for (size_t y = 0; y < dim; ++y) {
      acc += full[y + dim * bits];
      if (u < acc) return y;
    }
    return dim - 1;
  }

  /// Exact channel matrix entry P(read y | true x).
  double probability(std::uint64_t y, std::uint64_t x) const {
    if (!is_product()) {
      const size_t dim = size_t{1} << n;
      return full[y + dim * x];
    }
    double p = 1.0;
    for (int q = 0; q < n; ++q) {
      const bool xq = (x >> q) & 1;
      const bool yq = (y >> q) & 1;
      const double flip_p =
          xq ? p10[static_cast<size_t>(q)] : p01[static_cast<size_t>(q)];
      p *= (xq == yq) ? (1.0 - flip_p) : flip_p;
    }
    return p;
  }
};

}  // namespace vqdt
