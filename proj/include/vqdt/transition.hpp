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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqdt/noise.hpp"
#include "vqdt/pauli.hpp"
#include "vqdt/statevector.hpp"

namespace vqdt {

/**
 * Squared transition amplitudes |<psi1| A |psi2>|^2 of a Hermitian
 * observable A = sum_i a_i P_i between two orthogonal states, evaluated
 * purely from state overlaps:
 *
 *   |<psi1|A|psi2>|^2 = sum_i a_i^2 |<psi1|P_i|psi2>|^2
 *     + sum_{i<j} a_i a_j [ 2|<psi1|U+|psi2>|^2 + 2|<psi1|U-|psi2>|^2
 *         - |<psi1|P_i|psi2>|^2 - |<psi1|P_j|psi2>|^2
 *         - |<psi1|P_i P_j|psi2>|^2 ]
 *
 * with U+- = (I +- i P_i)(I +- i P_j)/2, a product of two Pauli rotations.
 * The identity holds only when <psi1|psi2> = 0, so orthogonality is checked
 * up front rather than assumed. Every right-hand-side term is an overlap of
 * psi1 against a short circuit applied to psi2, which in sampled mode
 * becomes a return-probability measurement of the composed circuit.
 */

/// Raised when the states fed to the overlap estimator are not orthogonal.
class OrthogonalityError : public std::runtime_error {
 public:
  explicit OrthogonalityError(double overlap_sq)
      : std::runtime_error(
            "transition amplitude requires orthogonal states; measured "
            "|<psi1|psi2>|^2 = " +
            std::to_string(overlap_sq)),
        overlap_squared(overlap_sq) {}
  double overlap_squared;
};

/// A quantum state given either as a raw vector or as circuit + basis
/// reference. Sampled estimation and the ancilla method need the circuit
/// form; exact estimation accepts both.
struct PreparedState {
  bool has_circuit = false;
  Circuit circuit;
  std::uint64_t reference = 0;
  StateVector vector;

  static PreparedState from_vector(StateVector v) {
    PreparedState s;
    s.has_circuit = false;
    s.vector = std::move(v);
    return s;
  }

  static PreparedState from_circuit(Circuit c, std::uint64_t reference = 0) {
    PreparedState s;
    s.has_circuit = true;
    s.vector = run(c, reference);
    s.circuit = std::move(c);
    s.reference = reference;
    return s;
  }

  /// circuit including reference preparation, generating the state from
  /// |0...0>
  Circuit full_circuit() const {
    if (!has_circuit) {
      throw std::invalid_argument(
          "this estimator needs states described by circuits");
    }
    return circuit.with_reference(reference);
  }
};

/// U_{ij,+-} = exp(+-i pi/4 P_i) exp(+-i pi/4 P_j) as a two-gate circuit.
/// Its matrix equals (I +- i P_i)(I +- i P_j)/2.
inline Circuit build_u_ij(const PauliString& pi, const PauliString& pj,
                          int sign) {
  if (pi.n() != pj.n()) {
    throw std::invalid_argument("build_u_ij: mismatched qubit counts");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("build_u_ij: sign must be +1 or -1");
  }
  // exp(+i pi/4 P) is the Pauli rotation exp(-i t P / 2) at t = -pi/2
  const double angle = -sign * std::numbers::pi / 2.0;
  Circuit c(pi.n());
  c.append(Gate::pauli_rotation(pj, angle));
  c.append(Gate::pauli_rotation(pi, angle));
  return c;
}

struct TransitionEstimate {
  double value = 0.0;      // clamped at 0
  double raw_value = 0.0;  // as combined, may be slightly negative (sampled)
  double std_error = 0.0;  // propagated through the combination (sampled)
  std::string method;
  long evaluations = 0;  // overlap evaluations issued
  double measured_orthogonality = 0.0;

  std::vector<double> diagonal;  // |<psi1|P_i|psi2>|^2 per term
  struct PairTerms {
    int i = 0;
    int j = 0;
    double o_plus = 0.0;
    double o_minus = 0.0;
    double o_i = 0.0;
    double o_j = 0.0;
    double o_ij = 0.0;
  };
  std::vector<PairTerms> pairs;
};

inline constexpr double kOrthogonalityTol = 1e-6;

struct SampledEstimation {
  long shots = 0;
  const ReadoutChannel* noise = nullptr;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_orthogonal(const PreparedState& s1, const PreparedState& s2,
                             double tol, TransitionEstimate& est) {
  if (s1.vector.n != s2.vector.n) {
    throw std::invalid_argument("transition amplitude: dimension mismatch");
  }
  est.measured_orthogonality =
      overlap_squared_direct(s1.vector, s2.vector);
  if (est.measured_orthogonality >= tol) {
    throw OrthogonalityError(est.measured_orthogonality);
  }
}

// accounting identity: diagonals plus three extra overlaps per pair
inline void check_evaluation_count(const TransitionEstimate& est, size_t m) {
  const long expected =
      static_cast<long>(m) + 3 * static_cast<long>(m * (m - 1) / 2);
  if (est.evaluations != expected) {
    throw std::logic_error("transition amplitude: evaluation count mismatch");
  }
}

}  // namespace detail

/// Exact-mode estimator; both states may be raw vectors.
inline TransitionEstimate transition_amplitude_squared(
    const Observable& a, const PreparedState& s1, const PreparedState& s2,
    double orthogonality_tol = kOrthogonalityTol) {
  const Observable an = observable_normalize(a);
  TransitionEstimate est;
  est.method = "eq3-exact";
  detail::check_orthogonal(s1, s2, orthogonality_tol, est);

  const auto& terms = an.terms();
  const size_t m = terms.size();

  est.diagonal.resize(m);
  double value = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const StateVector pi_psi2 = apply_pauli(terms[i].string, s2.vector);
    est.diagonal[i] = overlap_squared_direct(s1.vector, pi_psi2);
    ++est.evaluations;
    value += terms[i].coefficient * terms[i].coefficient * est.diagonal[i];
  }
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      TransitionEstimate::PairTerms pair;
      pair.i = static_cast<int>(i);
      pair.j = static_cast<int>(j);
      pair.o_i = est.diagonal[i];
      pair.o_j = est.diagonal[j];

      const StateVector up =
          run(build_u_ij(terms[i].string, terms[j].string, +1), s2.vector);
      const StateVector um =
          run(build_u_ij(terms[i].string, terms[j].string, -1), s2.vector);
      pair.o_plus = overlap_squared_direct(s1.vector, up);
      pair.o_minus = overlap_squared_direct(s1.vector, um);
      const PauliString pij =
          pauli_mul(terms[i].string, terms[j].string).string;  // phase dropped:
      // only |<psi1| P_i P_j |psi2>|^2 enters, which is phase-insensitive
      pair.o_ij = overlap_squared_direct(s1.vector,
                                         apply_pauli(pij, s2.vector));
      est.evaluations += 3;

      value += terms[i].coefficient * terms[j].coefficient *
               (2.0 * pair.o_plus + 2.0 * pair.o_minus - pair.o_i - pair.o_j -
                pair.o_ij);
      est.pairs.push_back(pair);
    }
  }
  detail::check_evaluation_count(est, m);
  est.raw_value = value;
  est.value = std::max(0.0, value);
  return est;
}

/// Sampled-mode estimator; both states must carry circuits. Every overlap
/// is measured as the all-zeros return probability of a composed circuit and
/// the standard error is propagated in quadrature with the combination
/// coefficients, reusing the diagonal measurements across pair terms.
inline TransitionEstimate transition_amplitude_squared(
    const Observable& a, const PreparedState& s1, const PreparedState& s2,
    const SampledEstimation& sampling,
    double orthogonality_tol = kOrthogonalityTol) {
  if (sampling.shots < 1) {
    throw std::invalid_argument("transition amplitude: shots < 1");
  }
  const Observable an = observable_normalize(a);
  TransitionEstimate est;
  est.method = "eq3-sampled";
  detail::check_orthogonal(s1, s2, orthogonality_tol, est);

  const Circuit c1 = s1.has_circuit ? s1.full_circuit() : Circuit(0);
  const Circuit c2 = s2.has_circuit ? s2.full_circuit() : Circuit(0);
  if (!s1.has_circuit || !s2.has_circuit) {
    throw std::invalid_argument(
        "sampled transition amplitude needs states described by circuits");
  }
  const Circuit c1_inv = c1.inverse();

  std::uint64_t draw = 0;
  auto measure_overlap = [&](const Circuit& ops) -> ReturnProbEstimate {
    const Circuit composed = c2.then(ops).then(c1_inv);
    ++est.evaluations;
    return sample_return_probability(composed, sampling.shots, sampling.noise,
                                     derive_seed(sampling.seed, draw++));
  };

  const auto& terms = an.terms();
  const size_t m = terms.size();

  std::vector<ReturnProbEstimate> diag(m);
  std::vector<double> diag_coeff(m, 0.0);
  double value = 0.0;
  double variance = 0.0;

  est.diagonal.resize(m);
  for (size_t i = 0; i < m; ++i) {
    Circuit ops(an.n());
    // P_i realized as the rotation exp(-i pi P_i / 2) = -i P_i; the global
    // phase cannot influence a return probability
    ops.append(Gate::pauli_rotation(terms[i].string, std::numbers::pi));
    diag[i] = measure_overlap(ops);
    est.diagonal[i] = diag[i].estimate;
    diag_coeff[i] = terms[i].coefficient * terms[i].coefficient;
  }
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      const double aij = terms[i].coefficient * terms[j].coefficient;
      TransitionEstimate::PairTerms pair;
      pair.i = static_cast<int>(i);
      pair.j = static_cast<int>(j);
      pair.o_i = diag[i].estimate;
      pair.o_j = diag[j].estimate;

      const auto up =
          measure_overlap(build_u_ij(terms[i].string, terms[j].string, +1));
      const auto um =
          measure_overlap(build_u_ij(terms[i].string, terms[j].string, -1));
      Circuit prod_ops(an.n());
      prod_ops.append(Gate::pauli_rotation(
          pauli_mul(terms[i].string, terms[j].string).string,
          std::numbers::pi));
      const auto oij = measure_overlap(prod_ops);

      pair.o_plus = up.estimate;
      pair.o_minus = um.estimate;
      pair.o_ij = oij.estimate;
      est.pairs.push_back(pair);

      value += aij * (2.0 * up.estimate + 2.0 * um.estimate - oij.estimate);
      diag_coeff[i] -= aij;
      diag_coeff[j] -= aij;
      variance += (2.0 * aij) * (2.0 * aij) *
                  (up.std_error * up.std_error + um.std_error * um.std_error);
      variance += aij * aij * oij.std_error * oij.std_error;
    }
  }
  for (size_t i = 0; i < m; ++i) {
    value += diag_coeff[i] * diag[i].estimate;
    variance += diag_coeff[i] * diag_coeff[i] * diag[i].std_error *
                diag[i].std_error;
  }
  detail::check_evaluation_count(est, m);
  est.raw_value = value;
  est.value = std::max(0.0, value);
  est.std_error = std::sqrt(variance);
  return est;
}

/**
 * Ancilla-based evaluation of the complex matrix element <psi1| A |psi2>.
 * One extra qubit controls which preparation circuit acts; the real and
 * imaginary parts are expectation values of X (x) P_i and Y (x) P_i on the
 * combined register. Works without the orthogonality assumption; the price
 * is controlled state preparation, which this simulator realizes by
 * restricting gate application to the matching ancilla subspace.
 */
inline std::complex<double> transition_amplitude_ancilla(const Observable& a,
                                                         const Circuit& u1,
                                                         const Circuit& u2) {
  if (u1.n != u2.n || a.n() != u1.n) {
    throw std::invalid_argument("transition_amplitude_ancilla: dimension mismatch");
  }
  const int n = u1.n;
  const int ancilla = n;

  StateVector s(n + 1, 0);
  s.amp.assign(s.dim(), cdouble{0.0, 0.0});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  s.amp[0] = inv_sqrt2;
  s.amp[std::uint64_t{1} << ancilla] = inv_sqrt2;

  apply_controlled(s, u1.widened(n + 1), ancilla, 0);
  apply_controlled(s, u2.widened(n + 1), ancilla, 1);

  double re = 0.0;
  double im = 0.0;
  const Observable an = observable_normalize(a);
  for (const auto& t : an.terms()) {
    const PauliString x_ext(t.string.ops() + "X");
    const PauliString y_ext(t.string.ops() + "Y");
    re += t.coefficient * pauli_expectation(x_ext, s);
    im += t.coefficient * pauli_expectation(y_ext, s);
  }
  return {re, im};
}

/// Convenience overload with basis references absorbed into the circuits.
inline std::complex<double> transition_amplitude_ancilla(
    const Observable& a, const Circuit& u1, std::uint64_t ref1,
    const Circuit& u2, std::uint64_t ref2) {
  return transition_amplitude_ancilla(a, u1.with_reference(ref1),
                                      u2.with_reference(ref2));
}

/**
 * Superposition estimator for states produced by one circuit from two basis
 * references, the native method of subspace-search style solvers:
 * with |+-> = U (|phi_i> +- |phi_j>)/sqrt 2,
 *   <psi_i| A |psi_j> = (<+|A|+> - <-|A|->)/2
 * holds when the states are real-valued, and the squared amplitude is
 * returned. Complex-amplitude states are refused; use the overlap or
 * ancilla estimators for those.
 */
inline double transition_amplitude_superposition(const Observable& a,
                                                 const Circuit& u,
                                                 std::uint64_t ref_i,
                                                 std::uint64_t ref_j,
                                                 double real_tol = 1e-10) {
  if (a.n() != u.n) {
    throw std::invalid_argument(
        "transition_amplitude_superposition: dimension mismatch");
  }
  if (ref_i == ref_j) {
    throw std::invalid_argument(
        "transition_amplitude_superposition: references must differ");
  }
  StateVector plus(u.n, 0);
  plus.amp.assign(plus.dim(), cdouble{0.0, 0.0});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  plus.amp[ref_i] = inv_sqrt2;
  plus.amp[ref_j] = inv_sqrt2;
  StateVector minus = plus;
  minus.amp[ref_j] = -inv_sqrt2;

  const StateVector sp = run(u, plus);
  const StateVector sm = run(u, minus);
  if (sp.max_imag() > real_tol || sm.max_imag() > real_tol) {
    throw std::domain_error(
        "transition_amplitude_superposition: states have complex amplitudes; "
        "use the overlap (Eq. 3 style) or ancilla estimator instead");
  }
  const double t = 0.5 * (expectation(a, sp) - expectation(a, sm));
  return t * t;
}

// ---------------------------------------------------------------------------
// Statistical error bars
// ---------------------------------------------------------------------------

/**
 * Sampling error of an energy built from per-term measurements, as the
 * shot-noise simulator reports it:
 *   dH = sqrt( (1/N) sum_i c_i^2 (dP_i)^2 )
 * where (dP_i)^2 is the sample variance of the +-1 outcomes of term i and N
 * the number of terms. Implemented exactly in this form; see
 * energy_error_bar_textbook for the independent-propagation variant that
 * divides per-term variances by their shot counts instead.
 */
inline double energy_error_bar(
    const std::vector<std::pair<double, double>>& term_variances) {
  const size_t n = term_variances.size();
  if (n == 0) {
    throw std::invalid_argument("energy_error_bar: no terms");
  }
  double acc = 0.0;
  for (const auto& [c, var] : term_variances) {
    acc += c * c * var;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

/// Textbook propagation: dH = sqrt( sum_i c_i^2 (dP_i)^2 / shots_i ).
inline double energy_error_bar_textbook(
    const std::vector<std::pair<double, double>>& term_variances, long shots) {
  const size_t n = term_variances.size();
  if (n == 0) {
    throw std::invalid_argument("energy_error_bar_textbook: no terms");
  }
  if (shots < 1) {
    throw std::invalid_argument("energy_error_bar_textbook: shots < 1");
  }
  double acc = 0.0;
  for (const auto& [c, var] : term_variances) {
    acc += c * c * var / static_cast<double>(shots);
  }
  return std::sqrt(acc);
}

/**
 * First-order error propagation through the oscillator-strength formula
 * f = (2/3) g sum_a T_a: the amplitude spread is the sample standard
 * deviation over repeated realizations of each axis, the gap error enters
 * with the summed amplitudes as its sensitivity, and the two contributions
 * add in quadrature.
 */
inline double oscillator_error_bar(
    double gap, double gap_error, const std::array<double, 3>& amplitudes,
    const std::array<std::vector<double>, 3>& realizations) {
  double amp_sum = 0.0;
  double amp_var_sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& reps = realizations[static_cast<size_t>(axis)];
    if (reps.size() < 2) {
      throw std::invalid_argument(
          "oscillator_error_bar: need at least 2 realizations per axis");
    }
    double mean = 0.0;
    for (double v : reps) mean += v;
    mean /= static_cast<double>(reps.size());
    double var = 0.0;
    for (double v : reps) var += (v - mean) * (v - mean);
    var /= static_cast<double>(reps.size() - 1);
    amp_var_sum += var;
    amp_sum += amplitudes[static_cast<size_t>(axis)];
  }
  const double two_thirds = 2.0 / 3.0;
  const double gap_part = two_thirds * amp_sum * gap_error;
  const double amp_part_sq =
      two_thirds * two_thirds * gap * gap * amp_var_sum;
  return std::sqrt(gap_part * gap_part + amp_part_sq);
}

// ---------------------------------------------------------------------------
// Oscillator strength
// ---------------------------------------------------------------------------

struct OscillatorStrengthResult {
  double f = 0.0;
  double f_error = 0.0;
  double gap = 0.0;  // E_j - E_i after ordering so the gap is nonnegative
  double gap_error = 0.0;
  std::array<double, 3> amplitudes{};        // per-axis values used in f
  std::array<double, 3> raw_amplitudes{};    // before clamping at 0
  std::array<double, 3> amplitude_errors{};  // std over realizations
  std::array<std::vector<double>, 3> realizations;
};

/// f = (2/3)(E_j - E_i) sum_{a in x,y,z} |<S_j| R_a |S_i>|^2, exact mode.
/// When E_j < E_i the states are treated in swapped order so the reported
/// gap is nonnegative.
inline OscillatorStrengthResult oscillator_strength_exact(
    double e_i, double e_j, const std::array<Observable, 3>& dipoles,
    const PreparedState& s_i, const PreparedState& s_j,
    double orthogonality_tol = kOrthogonalityTol) {
  OscillatorStrengthResult out;
  out.gap = std::abs(e_j - e_i);
  for (int axis = 0; axis < 3; ++axis) {
    const auto est = transition_amplitude_squared(
        dipoles[static_cast<size_t>(axis)], s_j, s_i, orthogonality_tol);
    out.raw_amplitudes[static_cast<size_t>(axis)] = est.raw_value;
    out.amplitudes[static_cast<size_t>(axis)] = est.value;
  }
  out.f = (2.0 / 3.0) * out.gap *
          (out.amplitudes[0] + out.amplitudes[1] + out.amplitudes[2]);
  return out;
}

/// Sampled mode: each axis amplitude is realized `repeats` times; the mean
/// (clamped at zero) enters f and the spread over realizations drives the
/// error bar together with the energy errors.
inline OscillatorStrengthResult oscillator_strength_sampled(
    double e_i, double e_j, double e_i_error, double e_j_error,
    const std::array<Observable, 3>& dipoles, const PreparedState& s_i,
    const PreparedState& s_j, long shots, const ReadoutChannel* noise,
    int repeats, std::uint64_t seed,
    double orthogonality_tol = kOrthogonalityTol) {
  if (repeats < 2) {
    throw std::invalid_argument("oscillator_strength_sampled: repeats < 2");
  }
  OscillatorStrengthResult out;
  out.gap = std::abs(e_j - e_i);
  out.gap_error = std::sqrt(e_i_error * e_i_error + e_j_error * e_j_error);
  for (int axis = 0; axis < 3; ++axis) {
    auto& reps = out.realizations[static_cast<size_t>(axis)];
    reps.reserve(static_cast<size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
      SampledEstimation sampling{
          shots, noise,
          derive_seed(seed, 97 * static_cast<std::uint64_t>(axis) +
                                static_cast<std::uint64_t>(r))};
      const auto est = transition_amplitude_squared(
          dipoles[static_cast<size_t>(axis)], s_j, s_i, sampling,
          orthogonality_tol);
      reps.push_back(est.raw_value);
    }
    double mean = 0.0;
    for (double v : reps) mean += v;
    mean /= static_cast<double>(reps.size());
    double var = 0.0;
    for (double v : reps) var += (v - mean) * (v - mean);
    var /= static_cast<double>(reps.size() - 1);
    out.raw_amplitudes[static_cast<size_t>(axis)] = mean;
    out.amplitudes[static_cast<size_t>(axis)] = std::max(0.0, mean);
    out.amplitude_errors[static_cast<size_t>(axis)] = std::sqrt(var);
  }
  out.f = (2.0 / 3.0) * out.gap *
          (out.amplitudes[0] + out.amplitudes[1] + out.amplitudes[2]);
  out.f_error = oscillator_error_bar(out.gap, out.gap_error, out.amplitudes,
                                     out.realizations);
  return out;
}

}  // namespace vqdt
