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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "vqdt/problem.hpp"
#include "vqdt/run.hpp"

namespace {

struct CliState {
  vqdt::RunConfig cfg;
  std::string problem_path;
  std::vector<std::string> sweep_paths;
  std::string config_path;
  std::vector<int> pair_list;  // flattened i j i j ...
  int calibrate_qubits = 2;
};

void add_common_options(CLI::App* cmd, CliState& st) {
  cmd->add_option("--algorithm", st.cfg.algorithm,
                  "vqe | ssvqe | mcvqe | vqd | all");
  cmd->add_option("-k,--k", st.cfg.k, "number of states");
  cmd->add_option("--ansatz", st.cfg.ansatz, "rsp | twolocal");
  cmd->add_option("--depth", st.cfg.depth, "ansatz depth D");
  cmd->add_option("--optimizer", st.cfg.optimizer, "bfgs | spsa");
  cmd->add_option("--max-iters", st.cfg.max_iters, "optimizer iteration cap");
  cmd->add_option("--rel-tol", st.cfg.rel_energy_tol,
                  "relative energy convergence tolerance");
  cmd->add_option("--restarts", st.cfg.restarts, "random restarts on stall");
  cmd->add_option("--mode", st.cfg.mode, "exact | sampled");
  cmd->add_option("--shots", st.cfg.shots, "shots per Pauli term / overlap");
  cmd->add_option("--seed", st.cfg.seed, "master seed; fixes the whole run");
  cmd->add_option("--noise", st.cfg.noise_flip,
                  "readout flip probability (one value or one per qubit)");
  cmd->add_flag("--mitigation", st.cfg.mitigation,
                "invert a confusion matrix on sampled histograms");
  cmd->add_option("--cm-file", st.cfg.cm_file, "saved confusion matrix");
  cmd->add_option("--n-cal", st.cfg.n_cal, "calibration shots per basis state");
  cmd->add_option("--penalty-alpha", st.cfg.penalty_alpha,
                  "multiplier of the penalty_sz2_alpha section");
  cmd->add_option("--penalty-beta", st.cfg.penalty_beta,
                  "multiplier of the penalty_s2_beta section");
  cmd->add_option("--n-electrons", st.cfg.n_electrons,
                  "electron count for reference-state generation");
  cmd->add_option("--references", st.cfg.references,
                  "explicit computational-basis reference indices");
  cmd->add_option("--weights", st.cfg.weights, "ssvqe weights (default k..1)");
  cmd->add_option("--beta", st.cfg.beta, "vqd deflation coefficients");
  cmd->add_option("--overlap-mode", st.cfg.overlap_mode,
                  "composition | direct");
  cmd->add_option("--method", st.cfg.method,
                  "eq3 | all (adds ancilla/superposition cross-checks)");
  cmd->add_option("--repeats", st.cfg.repeats,
                  "amplitude realizations per error bar");
  cmd->add_option("--errorbar", st.cfg.errorbar, "textbook | verbatim");
  cmd->add_option("-o,--output", st.cfg.output, "output path prefix");
  cmd->add_option("--config", st.config_path,
                  "JSON config file; values in it override flags");
}

// Config file wins over flags: parse flags first, then overwrite any field
// present in the file.
void apply_config_file(CliState& st) {
  if (st.config_path.empty()) return;
  std::ifstream f(st.config_path);
  if (!f) throw std::runtime_error("cannot open config file: " + st.config_path);
  nlohmann::json j;
  f >> j;
  auto& c = st.cfg;
  if (j.contains("algorithm")) c.algorithm = j["algorithm"].get<std::string>();
  if (j.contains("k")) c.k = j["k"].get<int>();
  if (j.contains("ansatz")) c.ansatz = j["ansatz"].get<std::string>();
  if (j.contains("depth")) c.depth = j["depth"].get<int>();
  if (j.contains("optimizer")) c.optimizer = j["optimizer"].get<std::string>();
  if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<int>();
  if (j.contains("rel_energy_tol")) c.rel_energy_tol = j["rel_energy_tol"].get<double>();
  if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
  if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
  if (j.contains("shots")) c.shots = j["shots"].get<long>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("noise_flip")) c.noise_flip = j["noise_flip"].get<std::vector<double>>();
  if (j.contains("mitigation")) c.mitigation = j["mitigation"].get<bool>();
  if (j.contains("cm_file")) c.cm_file = j["cm_file"].get<std::string>();
  if (j.contains("n_cal")) c.n_cal = j["n_cal"].get<long>();
  if (j.contains("penalty_alpha")) c.penalty_alpha = j["penalty_alpha"].get<double>();
  if (j.contains("penalty_beta")) c.penalty_beta = j["penalty_beta"].get<double>();
  if (j.contains("n_electrons")) c.n_electrons = j["n_electrons"].get<int>();
  if (j.contains("references")) c.references = j["references"].get<std::vector<std::uint64_t>>();
  if (j.contains("weights")) c.weights = j["weights"].get<std::vector<double>>();
  if (j.contains("beta")) c.beta = j["beta"].get<std::vector<double>>();
  if (j.contains("overlap_mode")) c.overlap_mode = j["overlap_mode"].get<std::string>();
  if (j.contains("method")) c.method = j["method"].get<std::string>();
  if (j.contains("repeats")) c.repeats = j["repeats"].get<int>();
  if (j.contains("errorbar")) c.errorbar = j["errorbar"].get<std::string>();
  if (j.contains("output")) c.output = j["output"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational eigensolvers with overlap-based transition amplitudes"};
  app.require_subcommand(1);

  CliState st;

  auto* solve = app.add_subcommand(
      "solve", "find eigenstates of a problem file and write results");
  solve->add_option("problem", st.problem_path, "problem file")->required();
  add_common_options(solve, st);

  auto* transition = app.add_subcommand(
      "transition",
      "solve, then estimate dipole transition amplitudes and oscillator "
      "strengths between state pairs");
  transition->add_option("problem", st.problem_path, "problem file")->required();
  transition->add_option("--pairs", st.pair_list,
                         "state index pairs, flattened (i j i j ...)");
  add_common_options(transition, st);

  auto* sweep = app.add_subcommand(
      "sweep",
      "solve an ordered list of problem files with warm starts and emit "
      "curve files");
  sweep->add_option("problems", st.sweep_paths, "problem files, in order")
      ->required()
      ->expected(-1);
  add_common_options(sweep, st);

  auto* calibrate = app.add_subcommand(
      "calibrate", "simulate readout calibration and save a confusion matrix");
  calibrate->add_option("--qubits", st.calibrate_qubits, "register size")
      ->required();
  add_common_options(calibrate, st);

  auto* exact = app.add_subcommand(
      "exact", "dense diagonalization reference for a problem file");
  exact->add_option("problem", st.problem_path, "problem file")->required();
  add_common_options(exact, st);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_config_file(st);
    if (solve->parsed()) {
      return vqdt::run_solve(vqdt::parse_problem_file(st.problem_path), st.cfg);
    }
    if (transition->parsed()) {
      if (st.pair_list.size() % 2 != 0) {
        throw std::invalid_argument("--pairs needs an even number of indices");
      }
      std::vector<std::pair<int, int>> pairs;
      for (size_t i = 0; i + 1 < st.pair_list.size(); i += 2) {
        pairs.push_back({st.pair_list[i], st.pair_list[i + 1]});
      }
      return vqdt::run_transition(vqdt::parse_problem_file(st.problem_path),
                                  st.cfg, pairs);
    }
    if (sweep->parsed()) {
      return vqdt::run_sweep(st.sweep_paths, st.cfg);
    }
    if (calibrate->parsed()) {
      return vqdt::run_calibrate(st.cfg, st.calibrate_qubits);
    }
    if (exact->parsed()) {
      return vqdt::run_exact(vqdt::parse_problem_file(st.problem_path), st.cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
