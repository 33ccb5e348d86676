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
#include <complex>
#include <vector>

#include "vqdt/ansatz.hpp"
#include "vqdt/noise.hpp"
#include "vqdt/pauli.hpp"
#include "vqdt/statevector.hpp"

namespace vqdt::testing {

inline PauliString random_pauli(int n, Rng& rng, bool nontrivial = false) {
  static const char chars[4] = {'I', 'X', 'Y', 'Z'};
  std::string s(static_cast<size_t>(n), 'I');
  do {
    for (int q = 0; q < n; ++q) {
      s[static_cast<size_t>(q)] = chars[rng.bits() % 4];
    }
  } while (nontrivial && s.find_first_not_of('I') == std::string::npos);
  return PauliString(s);
}

inline Observable random_observable(int n, int max_terms, Rng& rng,
                                    bool allow_identity = true) {
  Observable o(n);
  const int terms = 1 + static_cast<int>(rng.bits() % static_cast<unsigned>(max_terms));
  for (int t = 0; t < terms; ++t) {
    o.add_term(rng.uniform(-1.0, 1.0), random_pauli(n, rng, !allow_identity));
  }
  return observable_normalize(o);
}

inline StateVector random_state(int n, Rng& rng) {
  StateVector s(n, 0);
  for (auto& a : s.amp) a = cdouble{rng.normal(), rng.normal()};
  s.normalize();
  return s;
}

inline StateVector random_real_state(int n, Rng& rng) {
  StateVector s(n, 0);
  for (auto& a : s.amp) a = cdouble{rng.normal(), 0.0};
  s.normalize();
  return s;
}

/// second state orthogonalized against the first
inline std::pair<StateVector, StateVector> random_orthogonal_pair(int n,
                                                                  Rng& rng) {
  StateVector a = random_state(n, rng);
  StateVector b = random_state(n, rng);
  const cdouble ov = inner_product(a, b);
  for (size_t i = 0; i < b.dim(); ++i) b.amp[i] -= ov * a.amp[i];
  b.normalize();
  return {a, b};
}

/// random circuit over the full gate set
inline Circuit random_circuit(int n, int gates, Rng& rng) {
  Circuit c(n);
  for (int g = 0; g < gates; ++g) {
    const int kind = static_cast<int>(rng.bits() % 6);
    const int q0 = static_cast<int>(rng.bits() % static_cast<unsigned>(n));
    int q1 = q0;
    if (n > 1) {
      while (q1 == q0) q1 = static_cast<int>(rng.bits() % static_cast<unsigned>(n));
    }
    const double angle = rng.uniform(-3.0, 3.0);
    switch (kind) {
      case 0:
        c.append(Gate::ry(q0, angle));
        break;
      case 1:
        c.append(Gate::rz(q0, angle));
        break;
      case 2:
        c.append(Gate::x(q0));
        break;
      case 3:
        if (n > 1) c.append(Gate::cz(q0, q1));
        else c.append(Gate::ry(q0, angle));
        break;
      case 4:
        if (n > 1) c.append(Gate::cnot(q0, q1));
        else c.append(Gate::rz(q0, angle));
        break;
      default:
        c.append(Gate::pauli_rotation(random_pauli(n, rng, true), angle));
        break;
    }
  }
  return c;
}

inline Eigen::VectorXcd to_eigen(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s.amp[i];
  return v;
}

/// dense unitary of a circuit, column by column
inline Eigen::MatrixXcd circuit_matrix(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.n;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const StateVector s = run(c, static_cast<std::uint64_t>(col));
    m.col(col) = to_eigen(s);
  }
  return m;
}

}  // namespace vqdt::testing
