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
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqdt/ansatz.hpp"
#include "vqdt/eigensolvers.hpp"
#include "vqdt/mitigation.hpp"
#include "vqdt/oracle.hpp"
#include "vqdt/problem.hpp"
#include "vqdt/transition.hpp"

namespace vqdt {

using ordered_json = nlohmann::ordered_json;

/**
 * One configuration drives every command. A fixed seed reproduces a run
 * byte for byte: sampling streams, optimizer starts and calibration draws
 * all derive from it through fixed offsets.
 */
struct RunConfig {
  // solver
  std::string algorithm = "vqd";  // vqe | ssvqe | mcvqe | vqd | all
  int k = 1;
  std::string ansatz = "rsp";  // rsp | twolocal
  int depth = 4;
  std::string optimizer = "bfgs";  // bfgs | spsa
  int max_iters = 2000;
  double rel_energy_tol = 1e-8;
  int restarts = 0;

  // expectation evaluation
  std::string mode = "exact";  // exact | sampled
  long shots = 0;
  std::uint64_t seed = 1;
  std::vector<double> noise_flip;  // readout flip probabilities (1 = uniform)
  bool mitigation = false;
  std::string cm_file;   // reuse a saved confusion matrix
  long n_cal = 100000;   // calibration shots when no cm_file is given

  // problem shaping
  double penalty_alpha = 4.0;  // multiplier of the penalty_sz2_alpha section
  double penalty_beta = 1.0;   // multiplier of the penalty_s2_beta section
  int n_electrons = -1;        // enables filled/singles reference generation
  std::vector<std::uint64_t> references;
  std::vector<double> weights;     // ssvqe
  std::vector<double> beta;        // vqd deflation coefficients
  std::string overlap_mode = "composition";  // composition | direct

  // transition estimation
  std::string method = "eq3";  // eq3 | ancilla | superposition | all
  int repeats = 5;
  std::string errorbar = "textbook";  // textbook | verbatim

  // output
  std::string output = "run";

  void validate() const {
    if (mode != "exact" && mode != "sampled") {
      throw std::invalid_argument("mode must be 'exact' or 'sampled'");
    }
    if (mode == "sampled" && shots < 1) {
      throw std::invalid_argument("sampled mode requires --shots");
    }
    if (mitigation && noise_flip.empty() && cm_file.empty()) {
      throw std::invalid_argument(
          "mitigation requires a noise model or an explicit confusion matrix");
    }
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (repeats < 2) throw std::invalid_argument("repeats must be >= 2");
    if (errorbar != "textbook" && errorbar != "verbatim") {
      throw std::invalid_argument("errorbar must be 'textbook' or 'verbatim'");
    }
  }
};

namespace runner_detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::optional<ReadoutChannel> make_channel(const RunConfig& cfg, int n) {
  if (cfg.noise_flip.empty()) return std::nullopt;
  if (cfg.noise_flip.size() == 1) {
    return ReadoutChannel::uniform_flip(n, cfg.noise_flip[0]);
  }
  if (static_cast<int>(cfg.noise_flip.size()) != n) {
    throw std::invalid_argument(
        "noise flip probabilities must be one value or one per qubit");
  }
  return ReadoutChannel::per_qubit(cfg.noise_flip, cfg.noise_flip);
}

inline std::optional<ConfusionMatrix> make_confusion(
    const RunConfig& cfg, int n, const std::optional<ReadoutChannel>& channel) {
  if (!cfg.mitigation) return std::nullopt;
  if (!cfg.cm_file.empty()) return load_confusion(cfg.cm_file);
  if (!channel.has_value()) {
    throw std::invalid_argument("mitigation without cm_file requires noise");
  }
  return calibrate_confusion(*channel, n, cfg.n_cal,
                             derive_seed(cfg.seed, 0xca1));
}

inline ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["algorithm"] = c.algorithm;
  j["k"] = c.k;
  j["ansatz"] = c.ansatz;
  j["depth"] = c.depth;
  j["optimizer"] = c.optimizer;
  j["max_iters"] = c.max_iters;
  j["rel_energy_tol"] = c.rel_energy_tol;
  j["restarts"] = c.restarts;
  j["mode"] = c.mode;
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["noise_flip"] = c.noise_flip;
  j["mitigation"] = c.mitigation;
  j["cm_file"] = c.cm_file;
  j["n_cal"] = c.n_cal;
  j["penalty_alpha"] = c.penalty_alpha;
  j["penalty_beta"] = c.penalty_beta;
  j["n_electrons"] = c.n_electrons;
  j["references"] = c.references;
  j["weights"] = c.weights;
  j["beta"] = c.beta;
  j["overlap_mode"] = c.overlap_mode;
  j["method"] = c.method;
  j["repeats"] = c.repeats;
  j["errorbar"] = c.errorbar;
  j["output"] = c.output;
  return j;
}

}  // namespace runner_detail

/// H plus the configured multiples of the bundled penalty operators.
inline Observable effective_hamiltonian(const ProblemFile& problem,
                                        const RunConfig& cfg) {
  Observable h = observable_normalize(problem.hamiltonian());
  if (problem.has("penalty_sz2_alpha") && cfg.penalty_alpha != 0.0) {
    h = observable_scale_add(cfg.penalty_alpha,
                             problem.sections.at("penalty_sz2_alpha"), h);
  }
  if (problem.has("penalty_s2_beta") && cfg.penalty_beta != 0.0) {
    h = observable_scale_add(cfg.penalty_beta,
                             problem.sections.at("penalty_s2_beta"), h);
  }
  return h;
}

/// Reference states used by a solve, honoring explicit lists first, then
/// electron-count-driven generation, then plain defaults per algorithm.
inline std::vector<std::uint64_t> choose_references(const ProblemFile& problem,
                                                    const RunConfig& cfg) {
  if (!cfg.references.empty()) {
    for (std::uint64_t r : cfg.references) {
      if (r >= (std::uint64_t{1} << problem.n)) {
        throw std::invalid_argument("reference index out of range");
      }
    }
    return cfg.references;
  }
  if (cfg.n_electrons >= 0) {
    return hf_singles_references(problem.n, cfg.n_electrons, cfg.k);
  }
  if (cfg.ansatz == "rsp") {
    throw std::invalid_argument(
        "the particle-conserving ansatz needs --n-electrons or explicit "
        "--references");
  }
  std::vector<std::uint64_t> refs;
  if (cfg.algorithm == "vqd" || cfg.algorithm == "vqe") {
    refs.assign(static_cast<size_t>(cfg.k), 0);  // deflation from |0...0>
  } else {
    for (int i = 0; i < cfg.k; ++i) refs.push_back(static_cast<std::uint64_t>(i));
  }
  return refs;
}

struct SolveArtifacts {
  EigensolverResult result;
  std::vector<double> oracle_energies;  // k lowest of the solved operator
  Observable hamiltonian;               // the operator actually solved
  Ansatz ansatz;
  int exit_code = 0;
};

/// Run one algorithm on one problem. Library-level entry point used by the
/// CLI and by the sweep; file writing happens in the callers.
inline SolveArtifacts solve_problem(
    const ProblemFile& problem, const RunConfig& cfg,
    const std::string& algorithm,
    std::optional<std::vector<double>> warm_start = std::nullopt,
    std::optional<std::vector<std::vector<double>>> warm_start_levels =
        std::nullopt) {
  cfg.validate();
  SolveArtifacts out;
  out.hamiltonian = effective_hamiltonian(problem, cfg);

  AnsatzSpec spec{ansatz_family_from_string(cfg.ansatz), problem.n, cfg.depth};
  out.ansatz = Ansatz{spec};

  const auto channel = runner_detail::make_channel(cfg, problem.n);
  const auto cm = runner_detail::make_confusion(cfg, problem.n, channel);

  SolverOptions opts;
  opts.optimizer.method =
      cfg.optimizer == "spsa" ? OptimMethod::SPSA : OptimMethod::BFGS;
  opts.optimizer.max_iters = cfg.max_iters;
  opts.optimizer.rel_energy_tol = cfg.rel_energy_tol;
  opts.optimizer.restarts = cfg.restarts;
  opts.optimizer.seed = derive_seed(cfg.seed, 1);
  opts.model.mode = cfg.mode == "sampled" ? EnergyModel::Mode::Sampled
                                          : EnergyModel::Mode::Exact;
  opts.model.shots = cfg.shots;
  opts.model.noise = channel.has_value() ? &*channel : nullptr;
  opts.model.mitigation = cm.has_value() ? &*cm : nullptr;
  opts.model.seed = derive_seed(cfg.seed, 2);
  opts.initial_params = std::move(warm_start);
  opts.initial_params_per_level = std::move(warm_start_levels);

  const auto refs = choose_references(problem, cfg);

  if (algorithm == "vqe") {
    out.result = vqe(out.hamiltonian, out.ansatz, refs[0], opts);
  } else if (algorithm == "ssvqe") {
    std::vector<std::uint64_t> k_refs(refs.begin(),
                                      refs.begin() + std::min<size_t>(refs.size(), cfg.k));
    out.result = ssvqe(out.hamiltonian, out.ansatz, k_refs, cfg.weights, opts);
  } else if (algorithm == "mcvqe") {
    std::vector<std::uint64_t> k_refs(refs.begin(),
                                      refs.begin() + std::min<size_t>(refs.size(), cfg.k));
    out.result = mcvqe(out.hamiltonian, out.ansatz, k_refs, opts);
  } else if (algorithm == "vqd") {
    DeflationConfig deflation;
    deflation.beta = cfg.beta;
    deflation.overlap_mode = cfg.overlap_mode == "direct"
                                 ? DeflationConfig::OverlapMode::Direct
                                 : DeflationConfig::OverlapMode::CircuitComposition;
    out.result = vqd(out.hamiltonian, out.ansatz, cfg.k, deflation, refs, opts);
  } else {
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  }

  if (problem.n <= oracle::kDenseQubitCap) {
    const auto spectrum = oracle::exact_eigensystem(out.hamiltonian);
    const size_t k = out.result.states.size();
    for (size_t i = 0; i < k && i < static_cast<size_t>(spectrum.eigenvalues.size());
         ++i) {
      out.oracle_energies.push_back(spectrum.eigenvalues(static_cast<Eigen::Index>(i)));
    }
  }
  out.exit_code = out.result.deflation_collapse ? 2 : 0;
  return out;
}

namespace runner_detail {

inline double state_energy_error(const RunConfig& cfg, const StateRecord& rec) {
  if (rec.final_term_variances.empty()) return 0.0;
  if (cfg.errorbar == "verbatim") {
    return energy_error_bar(rec.final_term_variances);
  }
  return energy_error_bar_textbook(rec.final_term_variances, cfg.shots);
}

inline ordered_json result_json(const RunConfig& cfg,
                                const SolveArtifacts& art) {
  const auto& r = art.result;
  ordered_json j;
  j["algorithm"] = r.algorithm;
  ordered_json states = ordered_json::array();
  for (size_t i = 0; i < r.states.size(); ++i) {
    const auto& s = r.states[i];
    ordered_json js;
    js["state"] = i;
    js["level"] = s.level;
    js["reference"] = s.reference;
    js["energy"] = s.energy;
    js["energy_error"] = state_energy_error(cfg, s);
    if (i < art.oracle_energies.size()) {
      js["oracle_energy"] = art.oracle_energies[i];
      js["deviation"] = s.energy - art.oracle_energies[i];
    }
    js["status"] = to_string(s.trace.status);
    js["iterations"] = s.trace.costs.size();
    js["cost_evaluations"] = s.trace.cost_evaluations;
    js["betas"] = s.betas;
    js["parameters"] = s.params;
    js["cost_trace"] = s.trace.costs;
    states.push_back(std::move(js));
  }
  j["states"] = std::move(states);
  j["overlaps"] = r.overlaps;
  j["deflation_collapse"] = r.deflation_collapse;
  if (!r.collapsed_pairs.empty()) {
    ordered_json cp = ordered_json::array();
    for (const auto& [a, b] : r.collapsed_pairs) cp.push_back({a, b});
    j["collapsed_pairs"] = std::move(cp);
  }
  if (r.algorithm == "mcvqe") {
    ordered_json ht = ordered_json::array();
    for (Eigen::Index row = 0; row < r.subspace_h.rows(); ++row) {
      ordered_json jr = ordered_json::array();
      for (Eigen::Index col = 0; col < r.subspace_h.cols(); ++col) {
        jr.push_back(r.subspace_h(row, col));
      }
      ht.push_back(std::move(jr));
    }
    j["subspace_hamiltonian"] = std::move(ht);
  }
  return j;
}

inline void append_solve_csv(std::ostringstream& csv, const RunConfig& cfg,
                             const SolveArtifacts& art) {
  const auto& r = art.result;
  for (size_t i = 0; i < r.states.size(); ++i) {
    const auto& s = r.states[i];
    csv << r.algorithm << "," << i << "," << s.reference << ","
        << format_double(s.energy) << ","
        << format_double(state_energy_error(cfg, s)) << ",";
    if (i < art.oracle_energies.size()) {
      csv << format_double(art.oracle_energies[i]) << ","
          << format_double(s.energy - art.oracle_energies[i]);
    } else {
      csv << ",";
    }
    csv << "," << to_string(s.trace.status) << "\n";
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
}

}  // namespace runner_detail

/**
 * The `solve` command: run one algorithm (or ssvqe+mcvqe+vqd with
 * algorithm=all), write <output>.json and <output>.csv. Exit code 0 on
 * success, 2 when a deflation collapse was flagged.
 */
inline int run_solve(const ProblemFile& problem, const RunConfig& cfg) {
  cfg.validate();
  std::vector<std::string> algorithms;
  if (cfg.algorithm == "all") {
    algorithms = {"ssvqe", "mcvqe", "vqd"};
  } else {
    algorithms = {cfg.algorithm};
  }

  ordered_json j;
  j["tool"] = "vqdt";
  j["command"] = "solve";
  j["config"] = runner_detail::config_json(cfg);
  j["problem"] = {{"n_qubits", problem.n}};
  {
    ordered_json names = ordered_json::array();
    for (const auto& [name, obs] : problem.sections) names.push_back(name);
    j["problem"]["sections"] = std::move(names);
    j["problem"]["hamiltonian_terms"] = problem.hamiltonian().size();
  }

  std::ostringstream csv;
  csv << "algorithm,state,reference,energy,energy_error,oracle_energy,"
         "deviation,status\n";

  int exit_code = 0;
  ordered_json results = ordered_json::array();
  ordered_json comparison = ordered_json::array();
  for (const auto& algo : algorithms) {
    const SolveArtifacts art = solve_problem(problem, cfg, algo);
    results.push_back(runner_detail::result_json(cfg, art));
    runner_detail::append_solve_csv(csv, cfg, art);
    exit_code = std::max(exit_code, art.exit_code);
    if (!art.oracle_energies.empty()) {
      double max_dev = 0.0;
      for (size_t i = 0; i < art.result.states.size() &&
                         i < art.oracle_energies.size();
           ++i) {
        max_dev = std::max(max_dev, std::abs(art.result.states[i].energy -
                                             art.oracle_energies[i]));
      }
      comparison.push_back({{"algorithm", algo}, {"max_deviation", max_dev}});
    }
  }
  j["results"] = std::move(results);
  if (cfg.algorithm == "all" && !comparison.empty()) {
    std::string best;
    double best_dev = 0.0;
    for (const auto& c : comparison) {
      const double d = c["max_deviation"].get<double>();
      if (best.empty() || d < best_dev) {
        best = c["algorithm"].get<std::string>();
        best_dev = d;
      }
    }
    j["comparison"] = {{"per_algorithm", comparison},
                       {"most_accurate", best}};
  }
  j["exit_code"] = exit_code;

  runner_detail::write_text(cfg.output + ".json", j.dump(2) + "\n");
  runner_detail::write_text(cfg.output + ".csv", csv.str());
  return exit_code;
}

/**
 * The `transition` command: solve (or reuse given parameters), then
 * estimate squared transition amplitudes of the dipole operators between
 * every requested state pair, the oscillator strength, and its error bar.
 */
inline int run_transition(const ProblemFile& problem, const RunConfig& cfg,
                          std::vector<std::pair<int, int>> pairs = {}) {
  cfg.validate();
  if (!problem.has_dipoles()) {
    throw std::invalid_argument(
        "oscillator strengths need dipole_x, dipole_y and dipole_z sections");
  }
  const auto dipoles = problem.dipoles();

  const std::string algo = cfg.algorithm == "all" ? "vqd" : cfg.algorithm;
  RunConfig solve_cfg = cfg;
  solve_cfg.mode = "exact";  // parameters are optimized exactly; sampling
                             // enters the estimation stage below
  const SolveArtifacts art = solve_problem(problem, solve_cfg, algo);
  const auto& states = art.result.states;
  const int k = static_cast<int>(states.size());
  if (pairs.empty()) {
    for (int i = 0; i < k; ++i) {
      for (int jx = i + 1; jx < k; ++jx) pairs.push_back({i, jx});
    }
  }

  const auto channel = runner_detail::make_channel(cfg, problem.n);
  const bool sampled = cfg.mode == "sampled";

  // exact oracle columns
  std::optional<oracle::ExactSpectrum> spectrum;
  if (problem.n <= oracle::kDenseQubitCap) {
    spectrum = oracle::exact_eigensystem(art.hamiltonian);
  }

  EnergyEvaluator sampled_energy(
      art.hamiltonian,
      EnergyModel{EnergyModel::Mode::Sampled, std::max<long>(cfg.shots, 1),
                  channel.has_value() ? &*channel : nullptr, nullptr,
                  derive_seed(cfg.seed, 3)});

  ordered_json j;
  j["tool"] = "vqdt";
  j["command"] = "transition";
  j["config"] = runner_detail::config_json(cfg);
  j["solve"] = runner_detail::result_json(cfg, art);

  std::ostringstream csv;
  csv << "i,j,method,amp_x,amp_y,amp_z,f,f_error,oracle_f,deviation\n";

  ordered_json rows = ordered_json::array();
  for (const auto& [i, jdx] : pairs) {
    if (i < 0 || jdx < 0 || i >= k || jdx >= k || i == jdx) {
      throw std::invalid_argument("bad state pair requested");
    }
    const auto& si = states[static_cast<size_t>(i)];
    const auto& sj = states[static_cast<size_t>(jdx)];
    PreparedState pi = PreparedState::from_circuit(
        art.ansatz.build(si.params), si.reference);
    PreparedState pj = PreparedState::from_circuit(
        art.ansatz.build(sj.params), sj.reference);

    OscillatorStrengthResult osc;
    double e_i = si.energy;
    double e_j = sj.energy;
    double e_i_err = 0.0;
    double e_j_err = 0.0;
    if (sampled) {
      // energies re-estimated by sampling so the gap carries an error bar
      e_i = sampled_energy(pi.vector);
      auto vi = sampled_energy.last_term_variances();
      e_i_err = cfg.errorbar == "verbatim"
                    ? energy_error_bar(vi)
                    : energy_error_bar_textbook(vi, cfg.shots);
      e_j = sampled_energy(pj.vector);
      auto vj = sampled_energy.last_term_variances();
      e_j_err = cfg.errorbar == "verbatim"
                    ? energy_error_bar(vj)
                    : energy_error_bar_textbook(vj, cfg.shots);
      osc = oscillator_strength_sampled(
          e_i, e_j, e_i_err, e_j_err, dipoles, pi, pj, cfg.shots,
          channel.has_value() ? &*channel : nullptr, cfg.repeats,
          derive_seed(cfg.seed, 4 + 1000 * static_cast<std::uint64_t>(i) +
                                   static_cast<std::uint64_t>(jdx)));
    } else {
      osc = oscillator_strength_exact(e_i, e_j, dipoles, pi, pj);
    }

    ordered_json row;
    row["i"] = i;
    row["j"] = jdx;
    row["method"] = sampled ? "eq3-sampled" : "eq3-exact";
    row["energy_i"] = e_i;
    row["energy_j"] = e_j;
    row["energy_error_i"] = e_i_err;
    row["energy_error_j"] = e_j_err;
    row["gap"] = osc.gap;
    row["gap_error"] = osc.gap_error;
    row["amplitudes"] = osc.amplitudes;
    row["raw_amplitudes"] = osc.raw_amplitudes;
    row["amplitude_errors"] = osc.amplitude_errors;
    row["f"] = osc.f;
    row["f_error"] = osc.f_error;

    // cross-method checks in exact mode
    if (!sampled && cfg.method != "eq3") {
      std::array<double, 3> anc{};
      for (int axis = 0; axis < 3; ++axis) {
        anc[static_cast<size_t>(axis)] = std::norm(transition_amplitude_ancilla(
            dipoles[static_cast<size_t>(axis)], pj.full_circuit(),
            pi.full_circuit()));
      }
      row["ancilla_amplitudes"] = anc;
      const bool shared_circuit = si.params == sj.params;
      if (shared_circuit && si.reference != sj.reference) {
        std::array<double, 3> sup{};
        for (int axis = 0; axis < 3; ++axis) {
          sup[static_cast<size_t>(axis)] = transition_amplitude_superposition(
              dipoles[static_cast<size_t>(axis)],
              art.ansatz.build(si.params), sj.reference, si.reference);
        }
        row["superposition_amplitudes"] = sup;
      }
    }

    double oracle_f = 0.0;
    if (spectrum.has_value()) {
      const auto& sp = *spectrum;
      double sum = 0.0;
      std::array<double, 3> oracle_amp{};
      for (int axis = 0; axis < 3; ++axis) {
        const auto amp = oracle::exact_transition_amplitude(
            dipoles[static_cast<size_t>(axis)],
            sp.eigenvectors.col(jdx), sp.eigenvectors.col(i));
        oracle_amp[static_cast<size_t>(axis)] = std::norm(amp);
        sum += std::norm(amp);
      }
      oracle_f = (2.0 / 3.0) *
                 std::abs(sp.eigenvalues(jdx) - sp.eigenvalues(i)) * sum;
      row["oracle_amplitudes"] = oracle_amp;
      row["oracle_f"] = oracle_f;
      row["f_deviation"] = osc.f - oracle_f;
    }
    rows.push_back(row);

    csv << i << "," << jdx << "," << row["method"].get<std::string>() << ","
        << runner_detail::format_double(osc.amplitudes[0]) << ","
        << runner_detail::format_double(osc.amplitudes[1]) << ","
        << runner_detail::format_double(osc.amplitudes[2]) << ","
        << runner_detail::format_double(osc.f) << ","
        << runner_detail::format_double(osc.f_error) << ","
        << runner_detail::format_double(oracle_f) << ","
        << runner_detail::format_double(osc.f - oracle_f) << "\n";
  }
  j["transitions"] = std::move(rows);
  j["exit_code"] = art.exit_code;

  runner_detail::write_text(cfg.output + ".json", j.dump(2) + "\n");
  runner_detail::write_text(cfg.output + ".csv", csv.str());
  return art.exit_code;
}

/**
 * The `sweep` command: solve an ordered list of problem files, warm-starting
 * each point from the previous point's optima (the first point starts from
 * uniform random angles in [0, 2pi]). Emits energy-vs-index and
 * f-vs-index curve files. A failing point is recorded and the sweep
 * continues; any failure makes the final exit code nonzero.
 */
inline int run_sweep(const std::vector<std::string>& paths,
                     const RunConfig& cfg) {
  cfg.validate();
  if (paths.empty()) throw std::invalid_argument("sweep needs problem files");

  std::ostringstream energy_csv;
  energy_csv << "point,file,state,energy,oracle_energy,deviation\n";
  std::ostringstream f_csv;
  f_csv << "point,file,i,j,f,oracle_f\n";
  bool wrote_f = false;

  ordered_json j;
  j["tool"] = "vqdt";
  j["command"] = "sweep";
  j["config"] = runner_detail::config_json(cfg);
  j["points"] = ordered_json::array();

  int exit_code = 0;
  std::optional<std::vector<double>> warm;
  std::optional<std::vector<std::vector<double>>> warm_levels;
  for (size_t point = 0; point < paths.size(); ++point) {
    ordered_json pj;
    pj["point"] = point;
    pj["file"] = paths[point];
    try {
      const ProblemFile problem = parse_problem_file(paths[point]);
      const std::string algo = cfg.algorithm == "all" ? "vqd" : cfg.algorithm;
      const SolveArtifacts art =
          solve_problem(problem, cfg, algo, warm, warm_levels);
      exit_code = std::max(exit_code, art.exit_code);

      for (size_t s = 0; s < art.result.states.size(); ++s) {
        const auto& rec = art.result.states[s];
        energy_csv << point << "," << paths[point] << "," << s << ","
                   << runner_detail::format_double(rec.energy) << ",";
        if (s < art.oracle_energies.size()) {
          energy_csv << runner_detail::format_double(art.oracle_energies[s])
                     << ","
                     << runner_detail::format_double(
                            rec.energy - art.oracle_energies[s]);
        } else {
          energy_csv << ",";
        }
        energy_csv << "\n";
      }

      if (problem.has_dipoles() && art.result.states.size() > 1) {
        wrote_f = true;
        const auto dipoles = problem.dipoles();
        std::optional<oracle::ExactSpectrum> spectrum;
        if (problem.n <= oracle::kDenseQubitCap) {
          spectrum = oracle::exact_eigensystem(art.hamiltonian);
        }
        for (size_t a = 0; a < art.result.states.size(); ++a) {
          for (size_t b = a + 1; b < art.result.states.size(); ++b) {
            const auto& sa = art.result.states[a];
            const auto& sb = art.result.states[b];
            const auto pa = PreparedState::from_circuit(
                art.ansatz.build(sa.params), sa.reference);
            const auto pb = PreparedState::from_circuit(
                art.ansatz.build(sb.params), sb.reference);
            const auto osc = oscillator_strength_exact(sa.energy, sb.energy,
                                                       dipoles, pa, pb);
            double oracle_f = 0.0;
            if (spectrum.has_value()) {
              double sum = 0.0;
              for (int axis = 0; axis < 3; ++axis) {
                sum += std::norm(oracle::exact_transition_amplitude(
                    dipoles[static_cast<size_t>(axis)],
                    spectrum->eigenvectors.col(static_cast<Eigen::Index>(b)),
                    spectrum->eigenvectors.col(static_cast<Eigen::Index>(a))));
              }
              oracle_f = (2.0 / 3.0) *
                         std::abs(spectrum->eigenvalues(static_cast<Eigen::Index>(b)) -
                                  spectrum->eigenvalues(static_cast<Eigen::Index>(a))) *
                         sum;
            }
            f_csv << point << "," << paths[point] << "," << a << "," << b
                  << "," << runner_detail::format_double(osc.f) << ","
                  << runner_detail::format_double(oracle_f) << "\n";
          }
        }
      }

      // warm start for the next point
      std::vector<std::vector<double>> level_params;
      for (const auto& rec : art.result.states) level_params.push_back(rec.params);
      warm = art.result.states.front().params;
      warm_levels = std::move(level_params);

      pj["status"] = "ok";
      ordered_json energies = ordered_json::array();
      for (const auto& rec : art.result.states) energies.push_back(rec.energy);
      pj["energies"] = std::move(energies);
      pj["deflation_collapse"] = art.result.deflation_collapse;
    } catch (const std::exception& e) {
      pj["status"] = "error";
      pj["message"] = e.what();
      exit_code = std::max(exit_code, 1);
    }
    j["points"].push_back(std::move(pj));
  }
  j["exit_code"] = exit_code;

  runner_detail::write_text(cfg.output + ".json", j.dump(2) + "\n");
  runner_detail::write_text(cfg.output + "_energies.csv", energy_csv.str());
  if (wrote_f) {
    runner_detail::write_text(cfg.output + "_f.csv", f_csv.str());
  }
  return exit_code;
}

/// The `calibrate` command: simulate a readout calibration and save the
/// confusion matrix for reuse.
inline int run_calibrate(const RunConfig& cfg, int n) {
  if (cfg.noise_flip.empty()) {
    throw std::invalid_argument("calibrate needs a noise model (--noise)");
  }
  const auto channel = runner_detail::make_channel(cfg, n);
  const auto cm =
      calibrate_confusion(*channel, n, cfg.n_cal, derive_seed(cfg.seed, 0xca1));
  save_confusion(cfg.output + ".cm.txt", cm);
  return 0;
}

/// The `exact` command: dense diagonalization of the effective Hamiltonian
/// with per-state expectation labels of every extra operator section.
inline int run_exact(const ProblemFile& problem, const RunConfig& cfg) {
  const Observable h = effective_hamiltonian(problem, cfg);
  if (problem.n > oracle::kDenseQubitCap) {
    throw std::invalid_argument("exact diagonalization is capped at 12 qubits");
  }
  const auto spectrum = oracle::exact_eigensystem(h);
  const int k = std::min<int>(cfg.k, static_cast<int>(spectrum.eigenvalues.size()));

  ordered_json j;
  j["tool"] = "vqdt";
  j["command"] = "exact";
  j["config"] = runner_detail::config_json(cfg);
  j["problem"] = {{"n_qubits", problem.n}};

  std::ostringstream csv;
  csv << "state,energy";
  std::vector<std::pair<std::string, Eigen::MatrixXcd>> labels;
  for (const auto& [name, obs] : problem.sections) {
    if (name == "hamiltonian") continue;
    labels.push_back({name, oracle::observable_to_matrix(obs)});
    csv << "," << name;
  }
  csv << "\n";

  ordered_json states = ordered_json::array();
  for (int i = 0; i < k; ++i) {
    ordered_json s;
    s["state"] = i;
    s["energy"] = spectrum.eigenvalues(i);
    csv << i << "," << runner_detail::format_double(spectrum.eigenvalues(i));
    const Eigen::VectorXcd v = spectrum.eigenvectors.col(i);
    for (const auto& [name, m] : labels) {
      const double e = (v.adjoint() * m * v)(0, 0).real();
      s[name] = e;
      csv << "," << runner_detail::format_double(e);
    }
    csv << "\n";
    states.push_back(std::move(s));
  }
  j["states"] = std::move(states);
  j["exit_code"] = 0;

  runner_detail::write_text(cfg.output + ".json", j.dump(2) + "\n");
  runner_detail::write_text(cfg.output + ".csv", csv.str());
  return 0;
}

}  // namespace vqdt
