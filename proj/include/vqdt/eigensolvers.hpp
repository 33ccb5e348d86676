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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqdt/ansatz.hpp"
#include "vqdt/mitigation.hpp"
#include "vqdt/optim.hpp"
#include "vqdt/statevector.hpp"

namespace vqdt {

/**
 * How energy expectation values are obtained inside the variational loops:
 * exact statevector contraction, or per-Pauli-term sampling with optional
 * readout noise and measurement-error mitigation. Sampling seeds derive
 * from a base seed plus a running draw counter, so a fixed seed pins every
 * result of a run.
 */
struct EnergyModel {
  enum class Mode { Exact, Sampled };
  Mode mode = Mode::Exact;
  long shots = 0;
  const ReadoutChannel* noise = nullptr;
  const ConfusionMatrix* mitigation = nullptr;
  std::uint64_t seed = 0;

  bool sampled() const { return mode == Mode::Sampled; }

  void validate() const {
    if (sampled() && shots < 1) {
      throw std::invalid_argument("EnergyModel: sampled mode requires shots >= 1");
    }
    if (mitigation != nullptr && !sampled()) {
      throw std::invalid_argument("EnergyModel: mitigation requires sampled mode");
    }
  }
};

/// Evaluates <H> on states; in sampled mode keeps the per-term sample
/// variances of the most recent evaluation for error-bar propagation.
class EnergyEvaluator {
 public:
  EnergyEvaluator(Observable h, EnergyModel model)
      : h_(observable_normalize(h)), model_(model) {
    model_.validate();
  }

  const Observable& observable() const { return h_; }
  const EnergyModel& model() const { return model_; }

  double operator()(const StateVector& s) {
    if (!model_.sampled()) {
      return expectation(h_, s);
    }
    last_stats_.clear();
    double e = 0.0;
    for (const auto& t : h_.terms()) {
      SampleStats st{};
      if (t.string.is_identity()) {
        st = {1.0, 0.0};
      } else if (model_.mitigation != nullptr) {
        st = mitigated_term(t.string, s);
      } else {
        st = sample_pauli_expectation(t.string, s, model_.shots, model_.noise,
                                      next_seed());
      }
      last_stats_.push_back(st);
      e += t.coefficient * st.mean;
    }
    return e;
  }

  /// (coefficient, sample variance) pairs of the last sampled evaluation
  std::vector<std::pair<double, double>> last_term_variances() const {
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i < last_stats_.size(); ++i) {
      out.push_back({h_.terms()[i].coefficient, last_stats_[i].variance});
    }
    return out;
  }

  long shots() const { return model_.shots; }

  std::uint64_t next_seed() { return derive_seed(model_.seed, counter_++); }

 private:
  SampleStats mitigated_term(const PauliString& p, const StateVector& s) {
    // rotate into Z basis, histogram through the noise channel, invert the
    // confusion matrix, take the parity expectation of the quasi-distribution
    StateVector rotated = s;
    detail::rotate_to_z_basis(rotated, p);
    const auto hist =
        sample_histogram(rotated, model_.shots, model_.noise, next_seed());
    const auto quasi = mitigate(hist, *model_.mitigation);
    PauliString zform = to_zform(p);
    const double mean = quasi_expectation_zstring(quasi.quasi, zform);
    // variance of the raw +-1 outcomes, before mitigation
    const std::uint64_t support = p.support_mask();
    double raw_mean = 0.0;
    for (std::uint64_t x = 0; x < hist.size(); ++x) {
      const double sign = (__builtin_popcountll(x & support) & 1) ? -1.0 : 1.0;
      raw_mean += sign * static_cast<double>(hist[x]);
    }
    raw_mean /= static_cast<double>(model_.shots);
    double variance = 0.0;
    if (model_.shots > 1) {
      variance = (static_cast<double>(model_.shots) * (1.0 - raw_mean * raw_mean)) /
                 static_cast<double>(model_.shots - 1);
      variance = std::max(0.0, variance);
    }
    return {mean, variance};
  }

  static PauliString to_zform(const PauliString& p) {
    std::string z(static_cast<size_t>(p.n()), 'I');
    for (int q = 0; q < p.n(); ++q) {
      if (p.op(q) != 'I') z[static_cast<size_t>(q)] = 'Z';
    }
    return PauliString(std::move(z));
  }

  Observable h_;
  EnergyModel model_;
  std::uint64_t counter_ = 0;
  std::vector<SampleStats> last_stats_;
};

struct StateRecord {
  int level = 0;  // deflation level or reference slot, in solve order
  std::uint64_t reference = 0;
  std::vector<double> params;
  double energy = 0.0;
  std::vector<std::pair<double, double>> final_term_variances;  // sampled mode
  OptimizationTrace trace;
  std::vector<double> betas;  // deflation coefficients applied at this level
};

struct EigensolverResult {
  std::string algorithm;
  std::vector<StateRecord> states;  // ascending energy
  // pairwise |<psi_i|psi_j>|^2 in reported state order (exact values)
  std::vector<std::vector<double>> overlaps;
  bool deflation_collapse = false;
  std::vector<std::pair<int, int>> collapsed_pairs;
  // MCVQE: subspace Hamiltonian and its eigenvectors (contraction
  // coefficients, one column per reported state)
  Eigen::MatrixXd subspace_h;
  Eigen::MatrixXd subspace_vectors;
  std::vector<std::uint64_t> reference_set;
};

struct SolverOptions {
  OptimizerConfig optimizer;
  EnergyModel model;
  std::optional<std::vector<double>> initial_params;
  // vqd only: an explicit start per deflation level (sweep warm starts);
  // overrides the level-chaining policy where present
  std::optional<std::vector<std::vector<double>>> initial_params_per_level;
};

namespace detail {

inline std::vector<double> random_initial_params(size_t count,
                                                 std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x1717));
  std::vector<double> x(count);
  for (auto& v : x) v = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  return x;
}

inline OptimResult run_optimizer(const CostFn& cost,
                                 const std::vector<ShiftRule>& rules,
                                 const OptimizerConfig& cfg,
                                 std::span<const double> x0) {
  if (cfg.method == OptimMethod::SPSA) {
    return minimize_spsa(cost, x0, cfg);
  }
  GradFn grad = [&cost, &rules](std::span<const double> p) {
    return parameter_shift_gradient(cost, p, rules);
  };
  OptimResult best = minimize_bfgs(cost, grad, x0, cfg);
  for (int r = 0; r < cfg.restarts &&
                  best.trace.status == TerminationStatus::Stalled;
       ++r) {
    const auto retry_x0 = random_initial_params(
        x0.size(), derive_seed(cfg.seed, 0xbeef + static_cast<std::uint64_t>(r)));
    OptimResult retry = minimize_bfgs(cost, grad, retry_x0, cfg);
    if (retry.cost < best.cost) best = std::move(retry);
  }
  return best;
}

inline void sort_states_ascending(EigensolverResult& result) {
  std::stable_sort(result.states.begin(), result.states.end(),
                   [](const StateRecord& a, const StateRecord& b) {
                     return a.energy < b.energy;
                   });
}

inline void fill_exact_overlaps(EigensolverResult& result,
                                const Ansatz& ansatz) {
  const size_t k = result.states.size();
  std::vector<StateVector> states;
  states.reserve(k);
  for (const auto& rec : result.states) {
    states.push_back(run(ansatz.build(rec.params), rec.reference));
  }
  result.overlaps.assign(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      result.overlaps[i][j] = overlap_squared_direct(states[i], states[j]);
    }
  }
}

}  // namespace detail

/**
 * Plain VQE: minimize <psi(theta)| H |psi(theta)> with psi generated by the
 * ansatz from a computational basis reference. The returned energy obeys
 * the variational bound up to sampling noise.
 */
inline EigensolverResult vqe(const Observable& h, const Ansatz& ansatz,
                             std::uint64_t reference,
                             const SolverOptions& opts) {
  if (h.n() != ansatz.spec.n) {
    throw std::invalid_argument("vqe: Hamiltonian and ansatz qubit counts differ");
  }
  EnergyEvaluator energy(h, opts.model);
  CostFn cost = [&](std::span<const double> p) {
    return energy(run(ansatz.build(p), reference));
  };
  const auto x0 = opts.initial_params.has_value()
                      ? *opts.initial_params
                      : detail::random_initial_params(
                            static_cast<size_t>(ansatz.spec.parameter_count()),
                            opts.optimizer.seed);
  OptimResult opt =
      detail::run_optimizer(cost, ansatz.shift_rules(), opts.optimizer, x0);
  if (opt.trace.status == TerminationStatus::Aborted) {
    throw std::runtime_error("vqe: optimizer aborted on non-finite cost");
  }

  EigensolverResult result;
  result.algorithm = "vqe";
  StateRecord rec;
  rec.level = 0;
  rec.reference = reference;
  rec.params = opt.params;
  rec.energy = energy(run(ansatz.build(opt.params), reference));
  rec.final_term_variances = energy.last_term_variances();
  rec.trace = std::move(opt.trace);
  result.states.push_back(std::move(rec));
  result.overlaps = {{1.0}};
  return result;
}

/**
 * Subspace-search VQE: one circuit maps k mutually orthogonal basis
 * references toward the k lowest eigenstates by minimizing the weighted sum
 * sum_i w_i <psi_i(theta)| H |psi_i(theta)> with strictly decreasing
 * positive weights. The produced states stay exactly orthogonal because
 * they are unitary images of orthogonal references.
 */
inline EigensolverResult ssvqe(const Observable& h, const Ansatz& ansatz,
                               const std::vector<std::uint64_t>& references,
                               std::vector<double> weights,
                               const SolverOptions& opts) {
  if (h.n() != ansatz.spec.n) {
    throw std::invalid_argument("ssvqe: Hamiltonian and ansatz qubit counts differ");
  }
  const size_t k = references.size();
  if (k == 0) throw std::invalid_argument("ssvqe: no references");
  for (size_t i = 0; i + 1 < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      if (references[i] == references[j]) {
        throw std::invalid_argument("ssvqe: references must be distinct");
      }
    }
  }
  if (weights.empty()) {
    // default w = (k, k-1, ..., 1)
    weights.resize(k);
    for (size_t i = 0; i < k; ++i) {
      weights[i] = static_cast<double>(k - i);
    }
  }
  if (weights.size() != k) {
    throw std::invalid_argument("ssvqe: weight count must match references");
  }
  for (size_t i = 0; i < k; ++i) {
    if (weights[i] <= 0.0 || (i > 0 && weights[i] >= weights[i - 1])) {
      throw std::invalid_argument(
          "ssvqe: weights must be strictly decreasing and positive");
    }
  }

  EnergyEvaluator energy(h, opts.model);
  CostFn cost = [&](std::span<const double> p) {
    const Circuit c = ansatz.build(p);
    double l = 0.0;
    for (size_t i = 0; i < k; ++i) {
      l += weights[i] * energy(run(c, references[i]));
    }
    return l;
  };
  const auto x0 = opts.initial_params.has_value()
                      ? *opts.initial_params
                      : detail::random_initial_params(
                            static_cast<size_t>(ansatz.spec.parameter_count()),
                            opts.optimizer.seed);
  OptimResult opt =
      detail::run_optimizer(cost, ansatz.shift_rules(), opts.optimizer, x0);
  if (opt.trace.status == TerminationStatus::Aborted) {
    throw std::runtime_error("ssvqe: optimizer aborted on non-finite cost");
  }

  EigensolverResult result;
  result.algorithm = "ssvqe";
  result.reference_set = references;
  const Circuit c = ansatz.build(opt.params);
  for (size_t i = 0; i < k; ++i) {
    StateRecord rec;
    rec.level = static_cast<int>(i);
    rec.reference = references[i];
    rec.params = opt.params;
    rec.energy = energy(run(c, references[i]));
    rec.final_term_variances = energy.last_term_variances();
    if (i == 0) rec.trace = opt.trace;  // one shared optimization
    result.states.push_back(std::move(rec));
  }
  detail::sort_states_ascending(result);
  detail::fill_exact_overlaps(result, ansatz);
  return result;
}

/**
 * Multistate contracted VQE: equal-weight state-averaged optimization, then
 * classical diagonalization of the k x k subspace Hamiltonian
 * Htilde_ij = <psi_i(theta*)| H |psi_j(theta*)>.
 *
 * Off-diagonal elements are computed two ways: the direct inner product on
 * statevectors, and the superposition estimator
 * (<+|H|+> - <-|H|->)/2 with |+-> = U(theta)(|phi_i> +- |phi_j>)/sqrt 2,
 * which is what a device would measure and is valid for real-valued
 * states. In exact mode both must agree; a residual imaginary part in the
 * direct element signals misuse with a complex-valued ansatz and raises.
 */
inline EigensolverResult mcvqe(const Observable& h, const Ansatz& ansatz,
                               const std::vector<std::uint64_t>& references,
                               const SolverOptions& opts,
                               double consistency_tol = 1e-8) {
  if (h.n() != ansatz.spec.n) {
    throw std::invalid_argument("mcvqe: Hamiltonian and ansatz qubit counts differ");
  }
  const size_t k = references.size();
  if (k == 0) throw std::invalid_argument("mcvqe: no references");

  EnergyEvaluator energy(h, opts.model);
  CostFn cost = [&](std::span<const double> p) {
    const Circuit c = ansatz.build(p);
    double l = 0.0;
    for (size_t i = 0; i < k; ++i) l += energy(run(c, references[i]));
    return l;
  };
  const auto x0 = opts.initial_params.has_value()
                      ? *opts.initial_params
                      : detail::random_initial_params(
                            static_cast<size_t>(ansatz.spec.parameter_count()),
                            opts.optimizer.seed);
  OptimResult opt =
      detail::run_optimizer(cost, ansatz.shift_rules(), opts.optimizer, x0);
  if (opt.trace.status == TerminationStatus::Aborted) {
    throw std::runtime_error("mcvqe: optimizer aborted on non-finite cost");
  }

  const Circuit c = ansatz.build(opt.params);
  const bool exact = !opts.model.sampled();
  Eigen::MatrixXd htilde(static_cast<Eigen::Index>(k),
                         static_cast<Eigen::Index>(k));

  std::vector<StateVector> psi;
  psi.reserve(k);
  for (size_t i = 0; i < k; ++i) psi.push_back(run(c, references[i]));

  for (size_t i = 0; i < k; ++i) {
    htilde(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        energy(psi[i]);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      // superposition route
      StateVector plus(ansatz.spec.n, 0);
      plus.amp.assign(plus.dim(), cdouble{0.0, 0.0});
      plus.amp[references[i]] = inv_sqrt2;
      plus.amp[references[j]] = inv_sqrt2;
      StateVector minus = plus;
      minus.amp[references[j]] = -inv_sqrt2;
      const double hij_sup =
          0.5 * (energy(run(c, plus)) - energy(run(c, minus)));

      double hij = hij_sup;
      if (exact) {
        // direct route, plus the real-valuedness and consistency checks
        const cdouble direct = inner_product(psi[i], apply_observable(energy.observable(), psi[j]));
        if (std::abs(direct.imag()) > consistency_tol) {
          throw std::runtime_error(
              "mcvqe: complex subspace matrix element; the contraction "
              "requires a real-valued ansatz");
        }
        if (std::abs(direct.real() - hij_sup) > consistency_tol) {
          throw std::runtime_error(
              "mcvqe: superposition estimator disagrees with direct inner "
              "product beyond tolerance");
        }
        hij = direct.real();
      }
      htilde(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij;
      htilde(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = hij;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(htilde);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("mcvqe: subspace diagonalization failed");
  }

  EigensolverResult result;
  result.algorithm = "mcvqe";
  result.reference_set = references;
  result.subspace_h = htilde;
  result.subspace_vectors = solver.eigenvectors();
  for (size_t i = 0; i < k; ++i) {
    StateRecord rec;
    rec.level = static_cast<int>(i);
    rec.reference = references[i];
    rec.params = opt.params;
    rec.energy = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    if (i == 0) rec.trace = opt.trace;
    result.states.push_back(std::move(rec));
  }
  // eigenvalues already ascend; contracted states are orthonormal
  result.overlaps.assign(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) result.overlaps[i][i] = 1.0;
  return result;
}

/// Automatic deflation coefficient: 2 sum_i |h_i| bounds the spectral range
/// from above (triangle inequality), and the +1 keeps the bound strict even
/// for diagonal operators that saturate it.
inline double default_deflation_beta(const Observable& h) {
  return 2.0 * observable_normalize(h).coefficient_l1() + 1.0;
}

struct DeflationConfig {
  std::vector<double> beta;  // per-level; empty requests the automatic value
  enum class OverlapMode { CircuitComposition, Direct };
  OverlapMode overlap_mode = OverlapMode::CircuitComposition;
  double collapse_threshold = 0.5;
  bool warm_start_levels = true;  // level j starts from level j-1's optimum

  void validate() const {
    for (double b : beta) {
      if (b <= 0.0) throw std::invalid_argument("vqd: beta must be positive");
    }
  }
};

/**
 * Variational quantum deflation. State 0 is a plain VQE; state j minimizes
 * <psi(theta)| H |psi(theta)> + sum_{i<j} beta_i |<psi(theta)|psi_i>|^2,
 * with the overlaps evaluated either by composing the known circuits or by
 * a direct inner product. The automatic beta exceeds the spectral range
 * of H (see default_deflation_beta), which makes every deflated minimum the
 * intended eigenstate.
 *
 * A converged state whose overlap with an earlier state exceeds the
 * collapse threshold is flagged in the result, never silently accepted.
 */
inline EigensolverResult vqd(const Observable& h, const Ansatz& ansatz, int k,
                             const DeflationConfig& deflation,
                             const std::vector<std::uint64_t>& references,
                             const SolverOptions& opts) {
  if (h.n() != ansatz.spec.n) {
    throw std::invalid_argument("vqd: Hamiltonian and ansatz qubit counts differ");
  }
  if (k < 1) throw std::invalid_argument("vqd: k must be >= 1");
  deflation.validate();
  if (!deflation.beta.empty() &&
      static_cast<int>(deflation.beta.size()) < k - 1) {
    throw std::invalid_argument("vqd: need beta for every deflated level");
  }

  // per-state references; a single entry is shared by all levels
  auto ref_for = [&](int level) -> std::uint64_t {
    if (references.empty()) return 0;
    if (references.size() == 1) return references[0];
    if (static_cast<int>(references.size()) < k) {
      throw std::invalid_argument("vqd: need a reference for every state");
    }
    return references[static_cast<size_t>(level)];
  };

  const double auto_beta = default_deflation_beta(h);
  auto beta_for = [&](int level) {
    return deflation.beta.empty() ? auto_beta
                                  : deflation.beta[static_cast<size_t>(level)];
  };

  EnergyEvaluator energy(h, opts.model);
  const bool sampled = opts.model.sampled();

  EigensolverResult result;
  result.algorithm = "vqd";

  struct Found {
    Circuit circuit;
    std::uint64_t reference;
    StateVector state;
  };
  std::vector<Found> found;

  std::vector<double> x0 = opts.initial_params.has_value()
                               ? *opts.initial_params
                               : detail::random_initial_params(
                                     static_cast<size_t>(
                                         ansatz.spec.parameter_count()),
                                     opts.optimizer.seed);

  for (int level = 0; level < k; ++level) {
    if (opts.initial_params_per_level.has_value() &&
        level < static_cast<int>(opts.initial_params_per_level->size())) {
      x0 = (*opts.initial_params_per_level)[static_cast<size_t>(level)];
    }
    const std::uint64_t ref = ref_for(level);
    CostFn cost = [&, level, ref](std::span<const double> p) {
      const Circuit c = ansatz.build(p);
      double value = energy(run(c, ref));
      for (int i = 0; i < level; ++i) {
        double ov = 0.0;
        if (sampled) {
          const Circuit composed = c.with_reference(ref).then(
              found[static_cast<size_t>(i)].circuit
                  .with_reference(found[static_cast<size_t>(i)].reference)
                  .inverse());
          ov = sample_return_probability(composed, opts.model.shots,
                                         opts.model.noise, energy.next_seed())
                   .estimate;
        } else if (deflation.overlap_mode ==
                   DeflationConfig::OverlapMode::CircuitComposition) {
          ov = overlap_squared_composed(found[static_cast<size_t>(i)].circuit,
                                        c,
                                        found[static_cast<size_t>(i)].reference,
                                        ref);
        } else {
          ov = overlap_squared_direct(found[static_cast<size_t>(i)].state,
                                      run(c, ref));
        }
        value += beta_for(i) * ov;
      }
      return value;
    };

    OptimizerConfig level_cfg = opts.optimizer;
    level_cfg.seed = derive_seed(opts.optimizer.seed, 0xd0 + static_cast<std::uint64_t>(level));
    OptimResult opt = detail::run_optimizer(cost, ansatz.shift_rules(),
                                            level_cfg, x0);
    if (opt.trace.status == TerminationStatus::Aborted) {
      throw std::runtime_error("vqd: optimizer aborted on non-finite cost");
    }

    StateRecord rec;
    rec.level = level;
    rec.reference = ref;
    rec.params = opt.params;
    const Circuit c = ansatz.build(opt.params);
    rec.energy = energy(run(c, ref));
    rec.final_term_variances = energy.last_term_variances();
    rec.trace = std::move(opt.trace);
    for (int i = 0; i < level; ++i) rec.betas.push_back(beta_for(i));
    result.states.push_back(std::move(rec));
    found.push_back({c, ref, run(c, ref)});

    if (deflation.warm_start_levels) {
      // The previous optimum is an exactly stationary point of the next
      // deflated cost (energy minimal, overlap penalty maximal), which
      // freezes gradient-based optimizers; a small seeded kick breaks it
      // while keeping the start close.
      x0 = result.states.back().params;
      Rng jitter(derive_seed(opts.optimizer.seed,
                             0x717 + static_cast<std::uint64_t>(level)));
      for (auto& v : x0) v += jitter.uniform(-0.2, 0.2);
    } else {
      x0 = detail::random_initial_params(
          static_cast<size_t>(ansatz.spec.parameter_count()),
          derive_seed(opts.optimizer.seed, 0xf00 + static_cast<std::uint64_t>(level)));
    }
  }

  detail::sort_states_ascending(result);
  detail::fill_exact_overlaps(result, ansatz);
  const size_t ks = result.states.size();
  for (size_t i = 0; i < ks; ++i) {
    for (size_t j = i + 1; j < ks; ++j) {
      if (result.overlaps[i][j] > deflation.collapse_threshold) {
        result.deflation_collapse = true;
        result.collapsed_pairs.push_back(
            {static_cast<int>(i), static_cast<int>(j)});
      }
    }
  }
  return result;
}

/**
 * Deterministic reference states for fermionic problems under the
 * interleaved spin-orbital ordering: the filled lowest-orbital state, then
 * spin-preserving single excitations, then spin-preserving doubles when
 * more states are requested.
 */
inline std::vector<std::uint64_t> hf_singles_references(int n_qubits,
                                                        int n_electrons,
                                                        int k) {
  if (n_electrons < 0 || n_electrons > n_qubits) {
    throw std::invalid_argument("hf_singles_references: bad electron count");
  }
  std::vector<std::uint64_t> refs;
  std::uint64_t hf = 0;
  for (int p = 0; p < n_electrons; ++p) hf |= std::uint64_t{1} << p;
  refs.push_back(hf);

  for (int p = 0; p < n_electrons && static_cast<int>(refs.size()) < k; ++p) {
    for (int q = n_electrons; q < n_qubits && static_cast<int>(refs.size()) < k;
         ++q) {
      if ((p & 1) != (q & 1)) continue;  // preserve Sz
      refs.push_back((hf & ~(std::uint64_t{1} << p)) | (std::uint64_t{1} << q));
    }
  }
  for (int p1 = 0; p1 < n_electrons && static_cast<int>(refs.size()) < k; ++p1) {
    for (int p2 = p1 + 1; p2 < n_electrons && static_cast<int>(refs.size()) < k;
         ++p2) {
      for (int q1 = n_electrons;
           q1 < n_qubits && static_cast<int>(refs.size()) < k; ++q1) {
        for (int q2 = q1 + 1;
             q2 < n_qubits && static_cast<int>(refs.size()) < k; ++q2) {
          const int spin_out = (p1 & 1) + (p2 & 1);
          const int spin_in = (q1 & 1) + (q2 & 1);
          if (spin_out != spin_in) continue;
          const std::uint64_t r = (hf & ~(std::uint64_t{1} << p1) &
                                   ~(std::uint64_t{1} << p2)) |
                                  (std::uint64_t{1} << q1) |
                                  (std::uint64_t{1} << q2);
          refs.push_back(r);
        }
      }
    }
  }
  if (static_cast<int>(refs.size()) < k) {
    throw std::invalid_argument(
        "hf_singles_references: not enough spin-preserving references");
  }
  refs.resize(static_cast<size_t>(k));
  return refs;
}

}  // namespace vqdt
