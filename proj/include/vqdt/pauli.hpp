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

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqdt {

inline constexpr double kDefaultDropTol = 1e-12;

/**
 * Tensor product of single-qubit Pauli operators, one per qubit.
 *
 * Text convention: one character of {I, X, Y, Z} per qubit, with qubit 0 as
 * the LEFTMOST character. "XZI" means X on qubit 0, Z on qubit 1, identity
 * on qubit 2. Statevector basis indices use bit q = (1 << q) for qubit q,
 * so the leftmost character of the text form corresponds to the least
 * significant bit of a basis index. This is the single most common source
 * of interop bugs; every file format and matrix builder in this project
 * follows the convention above.
 */
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(std::string ops) : ops_(std::move(ops)) {
    for (char c : ops_) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw std::invalid_argument(std::string("invalid Pauli character '") +
                                    c + "'");
      }
    }
  }

  static PauliString identity(int n) {
    return PauliString(std::string(static_cast<size_t>(n), 'I'));
  }

  /// Single Pauli `op` on `qubit`, identity elsewhere.
  static PauliString single(int n, int qubit, char op) {
    if (qubit < 0 || qubit >= n) {
      throw std::invalid_argument("qubit index out of range");
    }
    std::string s(static_cast<size_t>(n), 'I');
    s[static_cast<size_t>(qubit)] = op;
    return PauliString(std::move(s));
  }

  int n() const { return static_cast<int>(ops_.size()); }
  char op(int qubit) const { return ops_[static_cast<size_t>(qubit)]; }
  const std::string& ops() const { return ops_; }

  bool is_identity() const {
    return ops_.find_first_not_of('I') == std::string::npos;
  }

  /// Bit mask of qubits carrying X or Y (the bit-flipping part).
  std::uint64_t x_mask() const {
    std::uint64_t m = 0;
    for (int q = 0; q < n(); ++q) {
      if (ops_[static_cast<size_t>(q)] == 'X' ||
          ops_[static_cast<size_t>(q)] == 'Y') {
        m |= std::uint64_t{1} << q;
      }
    }
    return m;
  }

  /// Bit mask of qubits carrying Z or Y (the phase-flipping part).
  std::uint64_t z_mask() const {
    std::uint64_t m = 0;
    for (int q = 0; q < n(); ++q) {
      if (ops_[static_cast<size_t>(q)] == 'Z' ||
          ops_[static_cast<size_t>(q)] == 'Y') {
        m |= std::uint64_t{1} << q;
      }
    }
    return m;
  }

  int y_count() const {
    return static_cast<int>(std::count(ops_.begin(), ops_.end(), 'Y'));
  }

  /// qubits where the operator is not the identity
  std::uint64_t support_mask() const { return x_mask() | z_mask(); }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.ops_ == b.ops_;
  }
  friend bool operator!=(const PauliString& a, const PauliString& b) {
    return !(a == b);
  }
  friend bool operator<(const PauliString& a, const PauliString& b) {
    return a.ops_ < b.ops_;
  }

 private:
  std::string ops_;
};

/// Result of multiplying two Pauli strings: phase * string equals the
/// operator product, with phase one of {1, i, -1, -i}.
struct PauliProduct {
  std::complex<double> phase;
  PauliString string;
};

namespace detail {

inline int pauli_code(char c) {
  switch (c) {
    case 'I':
      return 0;
    case 'X':
      return 1;
    case 'Y':
      return 2;
    case 'Z':
      return 3;
    default:
      throw std::invalid_argument(std::string("invalid Pauli character '") +
                                  c + "'");
  }
}

// Single-qubit products p*q. prod holds the resulting operator, iexp the
// power of i picked up (X*Y = iZ has iexp 1, Y*X = -iZ has iexp 3, ...).
inline constexpr char kPauliChars[4] = {'I', 'X', 'Y', 'Z'};
inline constexpr int kProdCode[4][4] = {{0, 1, 2, 3},
                                        {1, 0, 3, 2},
                                        {2, 3, 0, 1},
                                        {3, 2, 1, 0}};
inline constexpr int kProdIExp[4][4] = {{0, 0, 0, 0},
                                        {0, 0, 1, 3},
                                        {0, 3, 0, 1},
                                        {0, 1, 3, 0}};

inline std::complex<double> i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace detail

/// Operator product of two Pauli strings on the same qubit count.
inline PauliProduct pauli_mul(const PauliString& p, const PauliString& q) {
  if (p.n() != q.n()) {
    throw std::invalid_argument("pauli_mul: mismatched qubit counts");
  }
  std::string out(static_cast<size_t>(p.n()), 'I');
  int iexp = 0;
  for (int k = 0; k < p.n(); ++k) {
    const int a = detail::pauli_code(p.op(k));
    const int b = detail::pauli_code(q.op(k));
    out[static_cast<size_t>(k)] =
        detail::kPauliChars[detail::kProdCode[a][b]];
    iexp += detail::kProdIExp[a][b];
  }
  return {detail::i_power(iexp), PauliString(std::move(out))};
}

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/**
 * Real-weighted sum of Pauli strings. Real coefficients guarantee
 * Hermiticity, which every consumer (expectation values, eigensolvers,
 * transition amplitudes) relies on. Complex phases only ever appear
 * transiently inside pauli_mul.
 */
class Observable {
 public:
  Observable() = default;

  explicit Observable(int n) : n_(n) {}

  Observable(int n, std::vector<PauliTerm> terms)
      : n_(n), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (t.string.n() != n_) {
        throw std::invalid_argument(
            "Observable: term qubit count does not match observable");
      }
    }
  }

  int n() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  void add_term(double coefficient, PauliString string) {
    if (string.n() != n_) {
      throw std::invalid_argument(
          "Observable: term qubit count does not match observable");
    }
    terms_.push_back({coefficient, std::move(string)});
  }

  /// Sum of |coefficient| over all terms; an upper bound on the operator
  /// norm and hence on half the spectral range.
  double coefficient_l1() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s;
  }

  friend bool operator==(const Observable& a, const Observable& b) {
    if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].coefficient != b.terms_[i].coefficient ||
          a.terms_[i].string != b.terms_[i].string) {
        return false;
      }
    }
    return true;
  }

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Canonical form: duplicate strings merged, coefficients below drop_tol
/// removed, terms sorted lexicographically by string. Idempotent.
inline Observable observable_normalize(const Observable& o,
                                       double drop_tol = kDefaultDropTol) {
  std::map<std::string, double> acc;
  for (const auto& t : o.terms()) {
    acc[t.string.ops()] += t.coefficient;
  }
  Observable out(o.n());
  for (const auto& [ops, c] : acc) {
    if (std::abs(c) >= drop_tol) {
      out.add_term(c, PauliString(ops));
    }
  }
  return out;
}

/// Normalized representation of a*o1 + o2.
inline Observable observable_scale_add(double a, const Observable& o1,
                                       const Observable& o2,
                                       double drop_tol = kDefaultDropTol) {
  if (o1.n() != o2.n()) {
    throw std::invalid_argument("observable_scale_add: mismatched qubit counts");
  }
  Observable out(o1.n());
  for (const auto& t : o1.terms()) out.add_term(a * t.coefficient, t.string);
  for (const auto& t : o2.terms()) out.add_term(t.coefficient, t.string);
  return observable_normalize(out, drop_tol);
}

}  // namespace vqdt
