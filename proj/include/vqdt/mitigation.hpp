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

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqdt/noise.hpp"
#include "vqdt/pauli.hpp"

namespace vqdt {

inline constexpr int kConfusionQubitCap = 10;

/**
 * Column-stochastic readout confusion matrix: entry (y, x) is the
 * probability of measuring bitstring y given prepared bitstring x.
 * Calibrated by state-preparation experiments; its inverse performs
 * measurement-error mitigation.
 */
struct ConfusionMatrix {
  int n = 0;
  long n_cal = 0;  // calibration shots per prepared basis state
  Eigen::MatrixXd a;

  std::uint64_t dim() const { return std::uint64_t{1} << n; }

  void validate(double tol = 1e-9) const {
    if (a.rows() != a.cols() ||
        a.rows() != static_cast<Eigen::Index>(dim())) {
      throw std::invalid_argument("ConfusionMatrix: wrong shape");
    }
    for (Eigen::Index x = 0; x < a.cols(); ++x) {
      double sum = 0.0;
      for (Eigen::Index y = 0; y < a.rows(); ++y) {
        const double v = a(y, x);
        if (v < -tol || v > 1.0 + tol) {
          throw std::invalid_argument("ConfusionMatrix: entry outside [0, 1]");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol) {
        throw std::invalid_argument("ConfusionMatrix: column not normalized");
      }
    }
  }
};

/**
 * Estimate the confusion matrix of a readout channel: prepare each of the
 * 2^n basis states, push n_cal shots through the channel, and tally
 * m(y, x) / n_cal per column.
 */
inline ConfusionMatrix calibrate_confusion(const ReadoutChannel& channel,
                                           int n, long n_cal,
                                           std::uint64_t seed) {
  if (n < 1 || n > kConfusionQubitCap) {
    throw std::invalid_argument("calibrate_confusion: qubit count out of range");
  }
  if (n_cal < 1) {
    throw std::invalid_argument("calibrate_confusion: n_cal < 1");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  ConfusionMatrix cm;
  cm.n = n;
  cm.n_cal = n_cal;
  cm.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                               static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    Rng rng(derive_seed(seed, x));
    for (long shot = 0; shot < n_cal; ++shot) {
      const std::uint64_t y = channel.flip(x, rng);
      cm.a(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += 1.0;
    }
  }
  cm.a /= static_cast<double>(n_cal);
  return cm;
}

/// The channel's exact confusion matrix (infinite-calibration limit).
inline ConfusionMatrix exact_confusion(const ReadoutChannel& channel, int n) {
  if (n < 1 || n > kConfusionQubitCap) {
    throw std::invalid_argument("exact_confusion: qubit count out of range");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  ConfusionMatrix cm;
  cm.n = n;
  cm.n_cal = 0;
  cm.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                               static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t y = 0; y < dim; ++y) {
      cm.a(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) =
          channel.probability(y, x);
    }
  }
  return cm;
}

struct MitigatedDistribution {
  std::vector<double> quasi;  // may contain small negatives
  bool has_negative = false;
  double min_value = 0.0;
};

namespace detail {

// Lawson-Hanson nonnegative least squares, small dense problems only.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& a,
                            const Eigen::VectorXd& b) {
  const Eigen::Index m = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(static_cast<size_t>(m), false);
  Eigen::VectorXd w = a.transpose() * (b - a * x);
  for (int outer = 0; outer < 3 * m + 30; ++outer) {
    Eigen::Index best = -1;
    double best_w = 1e-12;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[static_cast<size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<size_t>(best)] = true;

    for (int inner = 0; inner < 3 * m + 30; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<size_t>(j)]) idx.push_back(j);
      }
      Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
      const Eigen::VectorXd zk = ap.colPivHouseholderQr().solve(b);
      bool all_positive = true;
      for (Eigen::Index k = 0; k < zk.size(); ++k) {
        if (zk(k) <= 0.0) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        x.setZero();
        for (size_t k = 0; k < idx.size(); ++k) x(idx[k]) = zk(static_cast<Eigen::Index>(k));
        break;
      }
      double alpha = 1.0;
      for (size_t k = 0; k < idx.size(); ++k) {
        const double zi = zk(static_cast<Eigen::Index>(k));
        if (zi <= 0.0) {
          const double xi = x(idx[k]);
          if (xi - zi > 0.0) alpha = std::min(alpha, xi / (xi - zi));
        }
      }
      for (size_t k = 0; k < idx.size(); ++k) {
        const double zi = zk(static_cast<Eigen::Index>(k));
        x(idx[k]) += alpha * (zi - x(idx[k]));
        if (x(idx[k]) <= 1e-14) {
          x(idx[k]) = 0.0;
          passive[static_cast<size_t>(idx[k])] = false;
        }
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return x;
}

}  // namespace detail

/**
 * Apply the inverse of the confusion matrix to a measured histogram and
 * return the resulting quasi-probability vector. Small negative entries are
 * passed through (flagged), since the plain inverse is unbiased; the
 * least_squares switch instead solves a nonnegative least-squares problem
 * and renormalizes, trading bias for a proper distribution. Matrices with
 * condition number above cond_limit are refused.
 */
inline MitigatedDistribution mitigate(const std::vector<long>& histogram,
                                      const ConfusionMatrix& cm,
                                      double cond_limit = 1e6,
                                      bool least_squares = false) {
  const std::uint64_t dim = cm.dim();
  if (histogram.size() != dim) {
    throw std::invalid_argument("mitigate: histogram dimension mismatch");
  }
  long total = 0;
  for (long c : histogram) total += c;
  if (total <= 0) throw std::invalid_argument("mitigate: empty histogram");

  Eigen::VectorXd p(static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < dim; ++i) {
    p(static_cast<Eigen::Index>(i)) =
        static_cast<double>(histogram[i]) / static_cast<double>(total);
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.a, Eigen::ComputeThinU |
                                                        Eigen::ComputeThinV);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double smax = svd.singularValues()(0);
  const double cond = smin > 0.0 ? smax / smin
                                 : std::numeric_limits<double>::infinity();
  if (!(cond <= cond_limit)) {
    std::ostringstream msg;
    msg << "mitigate: confusion matrix ill-conditioned (condition number "
        << cond << " exceeds limit " << cond_limit << ")";
    throw std::runtime_error(msg.str());
  }

  Eigen::VectorXd q;
  if (least_squares) {
    q = detail::nnls(cm.a, p);
    const double sum = q.sum();
    if (sum > 0.0) q /= sum;
  } else {
    q = cm.a.partialPivLu().solve(p);
  }

  MitigatedDistribution out;
  out.quasi.resize(dim);
  out.min_value = 0.0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    out.quasi[i] = q(static_cast<Eigen::Index>(i));
    out.min_value = std::min(out.min_value, out.quasi[i]);
  }
  out.has_negative = out.min_value < 0.0;
  return out;
}

/// Expectation of a Z/I Pauli string under a (quasi-)distribution over
/// bitstrings. Strings carrying X or Y must be basis-rotated before the
/// histogram is taken; this helper refuses them.
inline double quasi_expectation_zstring(const std::vector<double>& quasi,
                                        const PauliString& zstring) {
  if (zstring.x_mask() != 0) {
    throw std::invalid_argument(
        "quasi_expectation_zstring: string must contain only I and Z");
  }
  if (quasi.size() != (size_t{1} << zstring.n())) {
    throw std::invalid_argument("quasi_expectation_zstring: dimension mismatch");
  }
  const std::uint64_t zm = zstring.z_mask();
  double e = 0.0;
  for (std::uint64_t x = 0; x < quasi.size(); ++x) {
    e += (__builtin_popcountll(x & zm) & 1) ? -quasi[x] : quasi[x];
  }
  return e;
}

/// Plain-text serialization so calibrations can be reused across runs.
inline void save_confusion(const std::string& path, const ConfusionMatrix& cm) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_confusion: cannot open " + path);
  f << cm.n << " " << cm.n_cal << "\n";
  f.precision(17);
  for (Eigen::Index y = 0; y < cm.a.rows(); ++y) {
    for (Eigen::Index x = 0; x < cm.a.cols(); ++x) {
      if (x > 0) f << " ";
      f << cm.a(y, x);
    }
    f << "\n";
  }
}

inline ConfusionMatrix load_confusion(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_confusion: cannot open " + path);
  ConfusionMatrix cm;
  f >> cm.n >> cm.n_cal;
  if (!f || cm.n < 1 || cm.n > kConfusionQubitCap) {
    throw std::runtime_error("load_confusion: bad header in " + path);
  }
  const Eigen::Index dim = Eigen::Index{1} << cm.n;
  cm.a.resize(dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      if (!(f >> cm.a(y, x))) {
        throw std::runtime_error("load_confusion: truncated matrix in " + path);
      }
    }
  }
  cm.validate(1e-6);
  return cm;
}

}  // namespace vqdt
