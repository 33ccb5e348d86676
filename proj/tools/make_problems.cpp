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

// Regenerates the bundled problem files under data/. Run from the repo
// root: build/tools/vqdt-make-problems data

#include <iomanip>
#include <iostream>
#include <string>

#include "vqdt/fermion.hpp"
#include "vqdt/oracle.hpp"
#include "vqdt/problem.hpp"

using namespace vqdt;

namespace {

// Two-site interacting fermions, interleaved spin-orbital order
// (site0 up, site0 down, site1 up, site1 down):
//   H = -t sum_s (a^_{0s} a_{1s} + h.c.) + U sum_site n_up n_down
//       + mu (N - 2)^2
// The quadratic number penalty pins the physical two-electron sector at the
// bottom of the full Fock-space spectrum, so dense diagonalization and the
// particle-conserving solvers agree on the low-lying states. With t = 1,
// U = 2, mu = 3 the three lowest Sz = 0 levels are 1 - sqrt(5), 0 and 2.
ProblemFile hubbard_dimer() {
  const double t = 1.0, u = 2.0, mu = 3.0;
  FermionOperator h(4);
  for (int s = 0; s < 2; ++s) {
    h.add_term(-t, {{s, true}, {s + 2, false}});
    h.add_term(-t, {{s + 2, true}, {s, false}});
  }
  h.add_term(u, {{0, true}, {0, false}, {1, true}, {1, false}});
  h.add_term(u, {{2, true}, {2, false}, {3, true}, {3, false}});

  const FermionOperator n = particle_number_op(4);
  FermionOperator penalty = mu * (n * n + (-4.0) * n);
  FermionOperator shift(4);
  shift.add_term(4.0 * mu, {});
  h = h + penalty + shift;

  ProblemFile p;
  p.n = 4;
  p.sections["hamiltonian"] = jordan_wigner(h);
  p.sections["penalty_sz2_alpha"] = build_sz_squared(2);
  p.sections["penalty_s2_beta"] = build_s_squared(2);
  return p;
}

// Two-qubit diatomic-style electronic Hamiltonian with dipole operators.
// Shape matches a tapered two-level molecular problem; the numbers are this
// repository's own fixture, chosen for a nondegenerate spectrum and a
// bright x-transition between the two lowest states.
ProblemFile lih_like() {
  ProblemFile p;
  p.n = 2;
  Observable h(2);
  h.add_term(-1.15, PauliString("II"));
  h.add_term(0.39, PauliString("ZI"));
  h.add_term(-0.39, PauliString("IZ"));
  h.add_term(-0.01, PauliString("ZZ"));
  h.add_term(0.18, PauliString("XX"));
  p.sections["hamiltonian"] = observable_normalize(h);

  Observable dx(2);
  dx.add_term(0.45, PauliString("XI"));
  dx.add_term(-0.35, PauliString("IX"));
  Observable dy(2);
  dy.add_term(0.10, PauliString("XI"));
  dy.add_term(0.10, PauliString("IX"));
  Observable dz(2);
  dz.add_term(0.60, PauliString("II"));
  dz.add_term(0.20, PauliString("ZI"));
  dz.add_term(-0.15, PauliString("IZ"));
  p.sections["dipole_x"] = observable_normalize(dx);
  p.sections["dipole_y"] = observable_normalize(dy);
  p.sections["dipole_z"] = observable_normalize(dz);
  return p;
}

ProblemFile one_qubit_z() {
  ProblemFile p;
  p.n = 1;
  Observable h(1);
  h.add_term(1.0, PauliString("Z"));
  p.sections["hamiltonian"] = h;
  return p;
}

ProblemFile two_qubit_zsum() {
  ProblemFile p;
  p.n = 2;
  Observable h(2);
  h.add_term(1.0, PauliString("ZI"));
  h.add_term(2.0, PauliString("IZ"));
  p.sections["hamiltonian"] = observable_normalize(h);
  return p;
}

void emit(const std::string& dir, const std::string& name,
          const ProblemFile& p, const std::string& comment) {
  const std::string path = dir + "/" + name;
  write_problem_file(path, p, comment);
  const auto spec = oracle::exact_eigensystem(p.hamiltonian());
  std::cout << path << ": n=" << p.n
            << " terms=" << p.hamiltonian().size() << " E0="
            << std::setprecision(12) << spec.eigenvalues(0) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  emit(dir, "one_qubit_z.txt", one_qubit_z(),
       "Single-qubit Z. Spectrum {-1, +1}.");
  emit(dir, "two_qubit_zsum.txt", two_qubit_zsum(),
       "Diagonal two-qubit test operator Z0 + 2 Z1.\n"
       "Spectrum {-3, -1, 1, 3}, one state per basis vector.");
  emit(dir, "hubbard_dimer.txt", hubbard_dimer(),
       "Two-site interacting-fermion problem on 4 qubits, interleaved\n"
       "spin-orbital order, with a quadratic particle-number pin.\n"
       "t = 1, U = 2, mu = 3. With the Sz^2 penalty at alpha = 4 the three\n"
       "lowest levels are 1 - sqrt(5), 0, 2.\n"
       "Regenerate: vqdt-make-problems <dir>");
  emit(dir, "lih_like_2q.txt", lih_like(),
       "Two-qubit diatomic-style Hamiltonian with dipole operators.\n"
       "Repository fixture; see data/README for provenance.\n"
       "Regenerate: vqdt-make-problems <dir>");
  return 0;
}
