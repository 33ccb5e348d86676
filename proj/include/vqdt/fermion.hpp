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

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqdt/pauli.hpp"

namespace vqdt {

/// One creation or annihilation operator acting on a fermionic mode.
struct FermionFactor {
  int mode = 0;
  bool creation = false;
};

/// Product of ladder operators with a real prefactor, e.g. 0.5 a0^ a1.
/// Factors are listed in operator order: factors[0] acts last.
struct FermionTerm {
  double coefficient = 0.0;
  std::vector<FermionFactor> factors;
};

/**
 * Real-weighted sum of ladder-operator products on n_modes spin-orbitals.
 *
 * Spin-orbital ordering is interleaved throughout this project: mode 2i is
 * spatial orbital i with spin up, mode 2i+1 the same orbital with spin
 * down. The operator itself is not required to be stored in explicitly
 * Hermitian form; jordan_wigner() verifies Hermiticity of the mapped result
 * instead.
 */
struct FermionOperator {
  int n_modes = 0;
  std::vector<FermionTerm> terms;

  FermionOperator() = default;
  explicit FermionOperator(int modes) : n_modes(modes) {}

  void add_term(double coefficient, std::vector<FermionFactor> factors) {
    terms.push_back({coefficient, std::move(factors)});
  }
};

inline FermionOperator operator+(const FermionOperator& a,
                                 const FermionOperator& b) {
  if (a.n_modes != b.n_modes) {
    throw std::invalid_argument("FermionOperator: mode count mismatch");
  }
  FermionOperator out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

inline FermionOperator operator*(double s, const FermionOperator& a) {
  FermionOperator out = a;
  for (auto& t : out.terms) t.coefficient *= s;
  return out;
}

/// Term-by-term operator product (factor lists concatenate, a acts after b).
inline FermionOperator operator*(const FermionOperator& a,
                                 const FermionOperator& b) {
  if (a.n_modes != b.n_modes) {
    throw std::invalid_argument("FermionOperator: mode count mismatch");
  }
  FermionOperator out(a.n_modes);
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      FermionTerm t;
      t.coefficient = ta.coefficient * tb.coefficient;
      t.factors = ta.factors;
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.terms.push_back(std::move(t));
    }
  }
  return out;
}

namespace detail {

// Weighted Pauli sum with complex coefficients. Only used transiently while
// multiplying out ladder operators; the public Observable type is real.
using ComplexPauliSum = std::map<std::string, std::complex<double>>;

inline ComplexPauliSum cps_mul(const ComplexPauliSum& a,
                               const ComplexPauliSum& b) {
  ComplexPauliSum out;
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) {
      PauliProduct p = pauli_mul(PauliString(sa), PauliString(sb));
      out[p.string.ops()] += ca * cb * p.phase;
    }
  }
  return out;
}

// Jordan-Wigner image of a single ladder operator:
//   a_p  = Z_0 ... Z_{p-1} (X_p + iY_p)/2
//   a_p^ = Z_0 ... Z_{p-1} (X_p - iY_p)/2
inline ComplexPauliSum jw_factor(const FermionFactor& f, int n_modes) {
  if (f.mode < 0 || f.mode >= n_modes) {
    throw std::invalid_argument("jordan_wigner: mode index out of range");
  }
  std::string base(static_cast<size_t>(n_modes), 'I');
  for (int q = 0; q < f.mode; ++q) base[static_cast<size_t>(q)] = 'Z';
  std::string with_x = base;
  with_x[static_cast<size_t>(f.mode)] = 'X';
  std::string with_y = base;
  with_y[static_cast<size_t>(f.mode)] = 'Y';

  ComplexPauliSum out;
  out[with_x] = {0.5, 0.0};
  out[with_y] = f.creation ? std::complex<double>{0.0, -0.5}
                           : std::complex<double>{0.0, 0.5};
  return out;
}

}  // namespace detail

/**
 * Jordan-Wigner transformation of a fermionic operator into a qubit
 * observable on n_modes qubits. The input must be Hermitian as an operator;
 * this is detected after mapping, when any residual imaginary coefficient
 * above imag_tol raises an error. Imaginary parts below the tolerance are
 * dropped.
 */
inline Observable jordan_wigner(const FermionOperator& f,
                                double imag_tol = 1e-10,
                                double drop_tol = kDefaultDropTol) {
  detail::ComplexPauliSum acc;
  const std::string id(static_cast<size_t>(f.n_modes), 'I');
  for (const auto& term : f.terms) {
    detail::ComplexPauliSum prod;
    prod[id] = {term.coefficient, 0.0};
    for (const auto& factor : term.factors) {
      prod = detail::cps_mul(prod, detail::jw_factor(factor, f.n_modes));
    }
    for (const auto& [s, c] : prod) acc[s] += c;
  }

  Observable out(f.n_modes);
  for (const auto& [s, c] : acc) {
    if (std::abs(c.imag()) > imag_tol) {
      throw std::invalid_argument(
          "jordan_wigner: non-Hermitian input (residual imaginary coefficient " +
          std::to_string(c.imag()) + " on " + s + ")");
    }
    if (std::abs(c.real()) >= drop_tol) {
      out.add_term(c.real(), PauliString(s));
    }
  }
  return observable_normalize(out, drop_tol);
}

/// Number operator sum_p a_p^ a_p on n_modes modes.
inline FermionOperator particle_number_op(int n_modes) {
  FermionOperator f(n_modes);
  for (int p = 0; p < n_modes; ++p) {
    f.add_term(1.0, {{p, true}, {p, false}});
  }
  return f;
}

/// Sz as a fermionic operator: (1/2) sum_i (n_{2i} - n_{2i+1}).
inline FermionOperator sz_op(int n_spatial) {
  FermionOperator f(2 * n_spatial);
  for (int i = 0; i < n_spatial; ++i) {
    f.add_term(0.5, {{2 * i, true}, {2 * i, false}});
    f.add_term(-0.5, {{2 * i + 1, true}, {2 * i + 1, false}});
  }
  return f;
}

/// Spin raising operator S+ = sum_i a^_{2i} a_{2i+1}.
inline FermionOperator s_plus_op(int n_spatial) {
  FermionOperator f(2 * n_spatial);
  for (int i = 0; i < n_spatial; ++i) {
    f.add_term(1.0, {{2 * i, true}, {2 * i + 1, false}});
  }
  return f;
}

/// z-component of total spin as a qubit observable on 2*n_spatial qubits.
inline Observable build_sz(int n_spatial) {
  return jordan_wigner(sz_op(n_spatial));
}

/// Sz^2 as a qubit observable; contains only I/Z strings.
inline Observable build_sz_squared(int n_spatial) {
  const FermionOperator sz = sz_op(n_spatial);
  return jordan_wigner(sz * sz);
}

/// Total spin S^2 = S- S+ + Sz (Sz + 1) as a qubit observable.
inline Observable build_s_squared(int n_spatial) {
  const FermionOperator sz = sz_op(n_spatial);
  const FermionOperator sp = s_plus_op(n_spatial);
  // S- is the Hermitian conjugate of S+: swap creation/annihilation and
  // reverse factor order.
  FermionOperator sm(2 * n_spatial);
  for (const auto& t : sp.terms) {
    FermionTerm c;
    c.coefficient = t.coefficient;
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
      c.factors.push_back({it->mode, !it->creation});
    }
    sm.terms.push_back(std::move(c));
  }
  return jordan_wigner(sm * sp + sz * sz + sz);
}

}  // namespace vqdt
