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
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vqdt/noise.hpp"
#include "vqdt/pauli.hpp"

namespace vqdt {

inline constexpr int kMaxQubits = 24;

using cdouble = std::complex<double>;

/**
 * Gate set of the simulator.
 *
 * Angle conventions, fixed once here and asserted in tests:
 *   RY(t)              = exp(-i t Y / 2)
 *   RZ(t)              = exp(-i t Z / 2)
 *   PauliRotation(P,t) = exp(-i t P / 2)
 *   GivensBlock(t) on qubits (a, b): identity on |00> and |11>; on the
 *     ordered pair (|01>, |10>) with |01> meaning qubit a clear and qubit b
 *     set, applies [[cos t, -sin t], [sin t, cos t]].
 *   Exchange(t) on qubits (a, b): identity on |00> and |11>; on the same
 *     ordered pair applies the real reflection [[cos t, sin t],
 *     [sin t, -cos t]]. Unlike the Givens rotation this block is not the
 *     exponential of a one-body fermionic generator, so ladders of it can
 *     build correlated states from a determinant reference.
 */
enum class GateKind { RY, RZ, X, CZ, CNOT, PauliRot, Givens, Exchange };

struct Gate {
  GateKind kind;
  int q0 = -1;
  int q1 = -1;
  double angle = 0.0;
  PauliString pauli;  // PauliRot only

  static Gate ry(int q, double angle) { return {GateKind::RY, q, -1, angle, {}}; }
  static Gate rz(int q, double angle) { return {GateKind::RZ, q, -1, angle, {}}; }
  static Gate x(int q) { return {GateKind::X, q, -1, 0.0, {}}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, a, b, 0.0, {}}; }
  static Gate cnot(int control, int target) {
    return {GateKind::CNOT, control, target, 0.0, {}};
  }
  static Gate pauli_rotation(PauliString p, double angle) {
    return {GateKind::PauliRot, -1, -1, angle, std::move(p)};
  }
  static Gate givens(int a, int b, double angle) {
    return {GateKind::Givens, a, b, angle, {}};
  }
  static Gate exchange(int a, int b, double angle) {
    return {GateKind::Exchange, a, b, angle, {}};
  }

  Gate inverse() const {
    Gate g = *this;
    switch (kind) {
      case GateKind::RY:
      case GateKind::RZ:
      case GateKind::PauliRot:
      case GateKind::Givens:
        g.angle = -angle;
        break;
      case GateKind::X:
      case GateKind::CZ:
      case GateKind::CNOT:
      case GateKind::Exchange:  // real symmetric involution
        break;  // self-inverse
    }
    return g;
  }
};

/// Ordered gate list on n qubits; generates states from a reference.
struct Circuit {
  int n = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int qubits) : n(qubits) {
    if (qubits < 0 || qubits > kMaxQubits) {
      throw std::invalid_argument("Circuit: qubit count out of range");
    }
  }

  void append(Gate g) {
    auto check = [this](int q) {
      if (q < 0 || q >= n) {
        throw std::invalid_argument("Circuit: gate target out of range");
      }
    };
    switch (g.kind) {
      case GateKind::RY:
      case GateKind::RZ:
      case GateKind::X:
        check(g.q0);
        break;
      case GateKind::CZ:
      case GateKind::CNOT:
      case GateKind::Givens:
      case GateKind::Exchange:
        check(g.q0);
        check(g.q1);
        if (g.q0 == g.q1) {
          throw std::invalid_argument("Circuit: two-qubit gate targets must differ");
        }
        break;
      case GateKind::PauliRot:
        if (g.pauli.n() != n) {
          throw std::invalid_argument("Circuit: Pauli rotation size mismatch");
        }
        break;
    }
    gates.push_back(std::move(g));
  }

  /// Gates inverted and reversed.
  Circuit inverse() const {
    Circuit inv(n);
    inv.gates.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
      inv.gates.push_back(it->inverse());
    }
    return inv;
  }

  /// this followed by `next` (apply order: this first)
  Circuit then(const Circuit& next) const {
    if (next.n != n) {
      throw std::invalid_argument("Circuit::then: qubit count mismatch");
    }
    Circuit out = *this;
    out.gates.insert(out.gates.end(), next.gates.begin(), next.gates.end());
    return out;
  }

  /// Same gates on a wider register; Pauli rotation strings pad with
  /// identities on the new qubits.
  Circuit widened(int new_n) const {
    if (new_n < n) {
      throw std::invalid_argument("Circuit::widened: cannot shrink");
    }
    Circuit out(new_n);
    for (Gate g : gates) {
      if (g.kind == GateKind::PauliRot) {
        g.pauli = PauliString(
            g.pauli.ops() + std::string(static_cast<size_t>(new_n - n), 'I'));
      }
      out.append(std::move(g));
    }
    return out;
  }

  /// X gates preparing computational basis state `index` from |0...0>.
  static Circuit basis_prep(int n, std::uint64_t index) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
      if ((index >> q) & 1) c.append(Gate::x(q));
    }
    return c;
  }

  /// Reference preparation followed by this circuit.
  Circuit with_reference(std::uint64_t index) const {
    return basis_prep(n, index).then(*this);
  }
};

struct StateVector {
  int n = 0;
  std::vector<cdouble> amp;

  StateVector() = default;
  StateVector(int qubits, std::uint64_t basis_index) : n(qubits) {
    if (qubits < 0 || qubits > kMaxQubits) {
      throw std::invalid_argument("StateVector: qubit count out of range");
    }
    amp.assign(size_t{1} << qubits, cdouble{0.0, 0.0});
    if (basis_index >= amp.size()) {
      throw std::invalid_argument("StateVector: basis index out of range");
    }
    amp[basis_index] = 1.0;
  }

  static StateVector from_amplitudes(int qubits, std::vector<cdouble> a) {
    if (a.size() != (size_t{1} << qubits)) {
      throw std::invalid_argument("StateVector: amplitude count mismatch");
    }
    StateVector s;
    s.n = qubits;
    s.amp = std::move(a);
    return s;
  }

  size_t dim() const { return amp.size(); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double nn = norm();
    if (nn <= 0.0) throw std::runtime_error("StateVector: zero norm");
    for (auto& a : amp) a /= nn;
  }

  double max_imag() const {
    double m = 0.0;
    for (const auto& a : amp) m = std::max(m, std::abs(a.imag()));
    return m;
  }
};

namespace detail {

/// Optional single-qubit control for gate application. Used to realize the
/// controlled state-preparation circuits of the ancilla estimator without a
/// separate controlled variant of every gate.
struct ControlSpec {
  int qubit = -1;
  int value = 1;
  bool active() const { return qubit >= 0; }
  bool matches(std::uint64_t x) const {
    return !active() || (((x >> qubit) & 1) == static_cast<unsigned>(value));
  }
};

inline void apply_1q_matrix(StateVector& s, int q, const cdouble u[2][2],
                            const ControlSpec& ctrl = {}) {
  const std::uint64_t m = std::uint64_t{1} << q;
  const std::uint64_t dim = s.dim();
  for (std::uint64_t x = 0; x < dim; ++x) {
    if ((x & m) != 0 || !ctrl.matches(x)) continue;
    const std::uint64_t y = x | m;
    const cdouble a0 = s.amp[x];
    const cdouble a1 = s.amp[y];
    s.amp[x] = u[0][0] * a0 + u[0][1] * a1;
    s.amp[y] = u[1][0] * a0 + u[1][1] * a1;
  }
}

/// i^k * (-1)^{popcount(x & z_mask)}: the amplitude factor of P|x> = c |x ^ x_mask>
inline cdouble pauli_column_factor(std::uint64_t x, std::uint64_t z_mask,
                                   int y_count) {
  int k = y_count & 3;
  if (__builtin_popcountll(x & z_mask) & 1) k += 2;
  switch (k & 3) {
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

inline void apply_gate(StateVector& s, const Gate& g,
                       const ControlSpec& ctrl = {}) {
  const std::uint64_t dim = s.dim();
  switch (g.kind) {
    case GateKind::RY: {
      const double c = std::cos(g.angle / 2.0), sn = std::sin(g.angle / 2.0);
      const cdouble u[2][2] = {{c, -sn}, {sn, c}};
      apply_1q_matrix(s, g.q0, u, ctrl);
      break;
    }
    case GateKind::RZ: {
      const cdouble e0 = std::polar(1.0, -g.angle / 2.0);
      const cdouble e1 = std::polar(1.0, g.angle / 2.0);
      const cdouble u[2][2] = {{e0, 0.0}, {0.0, e1}};
      apply_1q_matrix(s, g.q0, u, ctrl);
      break;
    }
    case GateKind::X: {
      const cdouble u[2][2] = {{0.0, 1.0}, {1.0, 0.0}};
      apply_1q_matrix(s, g.q0, u, ctrl);
      break;
    }
    case GateKind::CZ: {
      const std::uint64_t m = (std::uint64_t{1} << g.q0) | (std::uint64_t{1} << g.q1);
      for (std::uint64_t x = 0; x < dim; ++x) {
        if ((x & m) == m && ctrl.matches(x)) s.amp[x] = -s.amp[x];
      }
      break;
    }
    case GateKind::CNOT: {
      const std::uint64_t mc = std::uint64_t{1} << g.q0;
      const std::uint64_t mt = std::uint64_t{1} << g.q1;
      for (std::uint64_t x = 0; x < dim; ++x) {
        if ((x & mc) && !(x & mt) && ctrl.matches(x)) {
          std::swap(s.amp[x], s.amp[x | mt]);
        }
      }
      break;
    }
    case GateKind::Givens: {
      const std::uint64_t ma = std::uint64_t{1} << g.q0;
      const std::uint64_t mb = std::uint64_t{1} << g.q1;
      const double c = std::cos(g.angle), sn = std::sin(g.angle);
      for (std::uint64_t x = 0; x < dim; ++x) {
        // x plays |01> (qubit a clear, qubit b set); y plays |10>
        if ((x & ma) || !(x & mb) || !ctrl.matches(x)) continue;
        const std::uint64_t y = x ^ ma ^ mb;
        const cdouble a01 = s.amp[x];
        const cdouble a10 = s.amp[y];
        s.amp[x] = c * a01 - sn * a10;
        s.amp[y] = sn * a01 + c * a10;
      }
      break;
    }
    case GateKind::Exchange: {
      const std::uint64_t ma = std::uint64_t{1} << g.q0;
      const std::uint64_t mb = std::uint64_t{1} << g.q1;
      const double c = std::cos(g.angle), sn = std::sin(g.angle);
      for (std::uint64_t x = 0; x < dim; ++x) {
        if ((x & ma) || !(x & mb) || !ctrl.matches(x)) continue;
        const std::uint64_t y = x ^ ma ^ mb;
        const cdouble a01 = s.amp[x];
        const cdouble a10 = s.amp[y];
        s.amp[x] = c * a01 + sn * a10;
        s.amp[y] = sn * a01 - c * a10;
      }
      break;
    }
    case GateKind::PauliRot: {
      const std::uint64_t xm = g.pauli.x_mask();
      const std::uint64_t zm = g.pauli.z_mask();
      const int ny = g.pauli.y_count();
      const double c = std::cos(g.angle / 2.0), sn = std::sin(g.angle / 2.0);
      const cdouble mis{0.0, -sn};  // -i sin(t/2)
      if (xm == 0) {
        for (std::uint64_t x = 0; x < dim; ++x) {
          if (!ctrl.matches(x)) continue;
          const double lambda =
              (__builtin_popcountll(x & zm) & 1) ? -1.0 : 1.0;
          s.amp[x] *= (c + mis * lambda);
        }
      } else {
        const std::uint64_t pivot = xm & (~xm + 1);  // lowest set bit
        for (std::uint64_t x = 0; x < dim; ++x) {
          if ((x & pivot) || !ctrl.matches(x)) continue;
          const std::uint64_t y = x ^ xm;
          const cdouble fx = pauli_column_factor(x, zm, ny);
          const cdouble fy = pauli_column_factor(y, zm, ny);
          const cdouble ax = s.amp[x];
          const cdouble ay = s.amp[y];
          s.amp[x] = c * ax + mis * fy * ay;
          s.amp[y] = c * ay + mis * fx * ax;
        }
      }
      break;
    }
  }
}

}  // namespace detail

/// Apply a Pauli string as an operator: out = P |s>.
inline StateVector apply_pauli(const PauliString& p, const StateVector& s) {
  if (p.n() != s.n) {
    throw std::invalid_argument("apply_pauli: dimension mismatch");
  }
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  const int ny = p.y_count();
  StateVector out;
  out.n = s.n;
  out.amp.assign(s.dim(), cdouble{0.0, 0.0});
  for (std::uint64_t x = 0; x < s.dim(); ++x) {
    out.amp[x ^ xm] = detail::pauli_column_factor(x, zm, ny) * s.amp[x];
  }
  return out;
}

/// out = O |s> for a weighted Pauli sum.
inline StateVector apply_observable(const Observable& o, const StateVector& s) {
  if (o.n() != s.n) {
    throw std::invalid_argument("apply_observable: dimension mismatch");
  }
  StateVector out;
  out.n = s.n;
  out.amp.assign(s.dim(), cdouble{0.0, 0.0});
  for (const auto& t : o.terms()) {
    const StateVector ps = apply_pauli(t.string, s);
    for (size_t i = 0; i < out.dim(); ++i) {
      out.amp[i] += t.coefficient * ps.amp[i];
    }
  }
  return out;
}

/// Run a circuit from a computational basis state.
inline StateVector run(const Circuit& c, std::uint64_t basis_index = 0) {
  StateVector s(c.n, basis_index);
  for (const auto& g : c.gates) detail::apply_gate(s, g);
  return s;
}

/// Run a circuit from an arbitrary normalized reference state.
inline StateVector run(const Circuit& c, const StateVector& reference) {
  if (reference.n != c.n) {
    throw std::invalid_argument("run: dimension mismatch");
  }
  StateVector s = reference;
  for (const auto& g : c.gates) detail::apply_gate(s, g);
  return s;
}

/// Apply circuit gates only on the subspace where `control_qubit` has value
/// `control_value`. The circuit must not touch the control qubit.
inline void apply_controlled(StateVector& s, const Circuit& c,
                             int control_qubit, int control_value) {
  detail::ControlSpec ctrl{control_qubit, control_value};
  for (const auto& g : c.gates) detail::apply_gate(s, g, ctrl);
}

inline cdouble inner_product(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  cdouble acc{0.0, 0.0};
  for (size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
  return acc;
}

/// <s| P |s>, exact. Hermitian P makes this real; the imaginary part is
/// discarded after an internal sanity bound.
inline double pauli_expectation(const PauliString& p, const StateVector& s) {
  if (p.n() != s.n) {
    throw std::invalid_argument("pauli_expectation: dimension mismatch");
  }
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  const int ny = p.y_count();
  cdouble acc{0.0, 0.0};
  for (std::uint64_t x = 0; x < s.dim(); ++x) {
    acc += std::conj(s.amp[x ^ xm]) *
           detail::pauli_column_factor(x, zm, ny) * s.amp[x];
  }
  return acc.real();
}

/// <s| O |s> = sum_i a_i <s| P_i |s>, exact (no sampling).
inline double expectation(const Observable& o, const StateVector& s) {
  if (o.n() != s.n) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  double e = 0.0;
  for (const auto& t : o.terms()) {
    e += t.coefficient * pauli_expectation(t.string, s);
  }
  return e;
}

/// |<psi1|psi2>|^2 from explicit statevectors.
inline double overlap_squared_direct(const StateVector& a,
                                     const StateVector& b) {
  return std::norm(inner_product(a, b));
}

/// |<ref1| C1^dag C2 |ref2>|^2 evaluated as the probability of measuring
/// basis state ref1 after running C2 from ref2 followed by the inverse of
/// C1. With ref1 = ref2 = 0 this is the all-zeros return probability of the
/// composed circuit.
inline double overlap_squared_composed(const Circuit& c1, const Circuit& c2,
                                       std::uint64_t ref1 = 0,
                                       std::uint64_t ref2 = 0) {
  if (c1.n != c2.n) {
    throw std::invalid_argument("overlap_squared: dimension mismatch");
  }
  const StateVector s = run(c2.then(c1.inverse()), ref2);
  return std::norm(s.amp[ref1]);
}

/// |<psi1|psi2>|^2 where psi_i = run(c_i, ref_i). Composed-circuit route for
/// basis references, direct inner product otherwise; the two agree.
inline double overlap_squared(const Circuit& c1, const Circuit& c2,
                              std::uint64_t ref1 = 0, std::uint64_t ref2 = 0) {
  return overlap_squared_composed(c1, c2, ref1, ref2);
}

inline double overlap_squared(const Circuit& c1, const Circuit& c2,
                              const StateVector& ref1,
                              const StateVector& ref2) {
  return overlap_squared_direct(run(c1, ref1), run(c2, ref2));
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace detail {

// Measurement basis change: X is measured after H, Y after H S^dag.
inline void rotate_to_z_basis(StateVector& s, const PauliString& p) {
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cdouble h[2][2] = {{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}};
  const cdouble hsdg[2][2] = {{inv_sqrt2, cdouble{0.0, -inv_sqrt2}},
                              {inv_sqrt2, cdouble{0.0, inv_sqrt2}}};
  for (int q = 0; q < p.n(); ++q) {
    if (p.op(q) == 'X') apply_1q_matrix(s, q, h);
    if (p.op(q) == 'Y') apply_1q_matrix(s, q, hsdg);
  }
}

inline std::vector<double> cumulative_probabilities(const StateVector& s) {
  std::vector<double> cum(s.dim());
  double acc = 0.0;
  for (size_t i = 0; i < s.dim(); ++i) {
    acc += std::norm(s.amp[i]);
    cum[i] = acc;
  }
  return cum;
}

inline std::uint64_t draw_index(const std::vector<double>& cum, Rng& rng) {
  const double total = cum.back();
  const double u = rng.uniform() * total;
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return static_cast<std::uint64_t>(std::distance(cum.begin(), it) ==
                                            static_cast<long>(cum.size())
                                        ? cum.size() - 1
                                        : std::distance(cum.begin(), it));
}

}  // namespace detail

/// Measure all qubits of `s` in the computational basis `shots` times,
/// passing each outcome through the readout channel when given. Returns
/// counts per bitstring.
inline std::vector<long> sample_histogram(const StateVector& s, long shots,
                                          const ReadoutChannel* noise,
                                          std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_histogram: shots < 1");
  Rng rng(seed);
  const auto cum = detail::cumulative_probabilities(s);
  std::vector<long> hist(s.dim(), 0);
  for (long k = 0; k < shots; ++k) {
    std::uint64_t x = detail::draw_index(cum, rng);
    if (noise != nullptr) x = noise->flip(x, rng);
    ++hist[x];
  }
  return hist;
}

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance of the +-1 outcomes
};

/**
 * Estimate <s| P |s> by measuring P `shots` times: rotate into a Z-product
 * basis, sample bitstrings from the exact outcome distribution, map each to
 * the +-1 parity over the support of P. Readout noise, when supplied, flips
 * classical bits before the parity is taken.
 */
inline SampleStats sample_pauli_expectation(const PauliString& p,
                                            const StateVector& s, long shots,
                                            const ReadoutChannel* noise,
                                            std::uint64_t seed) {
  if (p.n() != s.n) {
    throw std::invalid_argument("sample_pauli_expectation: dimension mismatch");
  }
  if (shots < 1) {
    throw std::invalid_argument("sample_pauli_expectation: shots < 1");
  }
  if (p.is_identity()) {
    return {1.0, 0.0};
  }
  StateVector rotated = s;
  detail::rotate_to_z_basis(rotated, p);
  const std::uint64_t support = p.support_mask();

  Rng rng(seed);
  const auto cum = detail::cumulative_probabilities(rotated);
  long sum = 0;
  for (long k = 0; k < shots; ++k) {
    std::uint64_t x = detail::draw_index(cum, rng);
    if (noise != nullptr) x = noise->flip(x, rng);
    sum += (__builtin_popcountll(x & support) & 1) ? -1 : 1;
  }
  const double mean = static_cast<double>(sum) / static_cast<double>(shots);
  double variance = 0.0;
  if (shots > 1) {
    // outcomes are +-1, so sum of squares is exactly `shots`
    variance = (static_cast<double>(shots) -
                static_cast<double>(shots) * mean * mean) /
               static_cast<double>(shots - 1);
    variance = std::max(0.0, variance);
  }
  return {mean, variance};
}

struct ReturnProbEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/**
 * Estimate the probability of measuring `return_index` (default: all zeros)
 * after running circuit `c` from |0...0>. The standard error is the
 * binomial sqrt(p(1-p)/shots) at the estimate.
 */
inline ReturnProbEstimate sample_return_probability(const Circuit& c,
                                                    long shots,
                                                    const ReadoutChannel* noise,
                                                    std::uint64_t seed,
                                                    std::uint64_t return_index = 0) {
  if (shots < 1) {
    throw std::invalid_argument("sample_return_probability: shots < 1");
  }
  const StateVector s = run(c, std::uint64_t{0});
  const auto hist = sample_histogram(s, shots, noise, seed);
  const double p =
      static_cast<double>(hist[return_index]) / static_cast<double>(shots);
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) /
                       static_cast<double>(shots))};
}

}  // namespace vqdt
