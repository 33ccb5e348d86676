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
#include <Eigen/Eigenvalues>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vqdt/pauli.hpp"

namespace vqdt::oracle {

inline constexpr int kDenseQubitCap = 12;

/**
 * Dense-matrix reference implementations. Everything in this namespace is
 * deliberately built from textbook Kronecker products and library
 * eigensolvers, independent of the stride/mask tricks used by the
 * statevector simulator, so the two routes can check each other.
 */

/// 2x2 matrix of a single Pauli operator.
inline Eigen::Matrix2cd pauli_matrix_1q(char op) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (op) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, -1i, 1i, 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("unknown Pauli operator");
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Dense matrix of one Pauli string. Qubit 0 is the leftmost character of
/// the text form and the least significant bit of a basis index, so the
/// Kronecker chain runs from qubit n-1 down to qubit 0.
inline Eigen::MatrixXcd pauli_string_matrix(const PauliString& p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = p.n() - 1; q >= 0; --q) {
    m = kron(m, pauli_matrix_1q(p.op(q)));
  }
  return m;
}

/// Dense Hermitian matrix of an observable, sum over its Pauli terms.
inline Eigen::MatrixXcd observable_to_matrix(const Observable& o) {
  if (o.n() > kDenseQubitCap) {
    throw std::invalid_argument("observable_to_matrix: qubit count above dense cap");
  }
  const Eigen::Index dim = Eigen::Index{1} << o.n();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : o.terms()) {
    m += t.coefficient * pauli_string_matrix(t.string);
  }
  return m;
}

struct ExactSpectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // orthonormal columns, same order
  // Optional per-state labels, filled when the corresponding operator is
  // supplied: <Sz>, <Sz^2>, <S^2>.
  std::vector<double> sz;
  std::vector<double> sz2;
  std::vector<double> s2;
};

struct SpectrumLabelOps {
  std::optional<Observable> sz;
  std::optional<Observable> sz2;
  std::optional<Observable> s2;
};

/**
 * Full dense Hermitian eigendecomposition, ascending eigenvalues.
 *
 * Within a degenerate block (eigenvalues closer than degeneracy_tol) the
 * states are reordered by descending <Sz^2> label when that operator is
 * supplied, falling back to the solver's original order. Reordering keeps
 * the columns orthonormal; no rotation inside a block is attempted.
 */
inline ExactSpectrum exact_eigensystem(const Observable& o,
                                       const SpectrumLabelOps& label_ops = {},
                                       double degeneracy_tol = 1e-9) {
  if (o.n() > kDenseQubitCap) {
    throw std::invalid_argument("exact_eigensystem: qubit count above dense cap");
  }
  const Eigen::MatrixXcd h = observable_to_matrix(o);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("exact_eigensystem: eigendecomposition failed");
  }

  ExactSpectrum spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors();

  auto state_label = [&](const Observable& op, Eigen::Index col) {
    const Eigen::MatrixXcd m = observable_to_matrix(op);
    const Eigen::VectorXcd v = spec.eigenvectors.col(col);
    return (v.adjoint() * m * v)(0, 0).real();
  };

  const Eigen::Index dim = spec.eigenvalues.size();
  std::vector<Eigen::Index> order(static_cast<size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) order[static_cast<size_t>(i)] = i;

  if (label_ops.sz2.has_value()) {
    std::vector<double> sz2(static_cast<size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      sz2[static_cast<size_t>(i)] = state_label(*label_ops.sz2, i);
    }
    // stable sort inside each degenerate block only
    Eigen::Index lo = 0;
    while (lo < dim) {
      Eigen::Index hi = lo + 1;
      while (hi < dim && spec.eigenvalues(hi) - spec.eigenvalues(lo) <
                             degeneracy_tol) {
        ++hi;
      }
      std::stable_sort(order.begin() + lo, order.begin() + hi,
                       [&](Eigen::Index a, Eigen::Index b) {
                         return sz2[static_cast<size_t>(a)] >
                                sz2[static_cast<size_t>(b)];
                       });
      lo = hi;
    }
  }

  ExactSpectrum out;
  out.eigenvalues.resize(dim);
  out.eigenvectors.resize(spec.eigenvectors.rows(), dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.eigenvalues(i) = spec.eigenvalues(order[static_cast<size_t>(i)]);
    out.eigenvectors.col(i) =
        spec.eigenvectors.col(order[static_cast<size_t>(i)]);
  }
  auto fill_labels = [&](const std::optional<Observable>& op,
                         std::vector<double>& dst) {
    if (!op.has_value()) return;
    const Eigen::MatrixXcd m = observable_to_matrix(*op);
    dst.resize(static_cast<size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::VectorXcd v = out.eigenvectors.col(i);
      dst[static_cast<size_t>(i)] = (v.adjoint() * m * v)(0, 0).real();
    }
  };
  fill_labels(label_ops.sz, out.sz);
  fill_labels(label_ops.sz2, out.sz2);
  fill_labels(label_ops.s2, out.s2);
  return out;
}

/// <v1| A |v2> for normalized dense vectors.
inline std::complex<double> exact_transition_amplitude(
    const Observable& a, const Eigen::VectorXcd& v1,
    const Eigen::VectorXcd& v2) {
  const Eigen::MatrixXcd m = observable_to_matrix(a);
  if (v1.size() != m.rows() || v2.size() != m.rows()) {
    throw std::invalid_argument("exact_transition_amplitude: dimension mismatch");
  }
  return (v1.adjoint() * m * v2)(0, 0);
}

}  // namespace vqdt::oracle
