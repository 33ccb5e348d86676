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

#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "helpers.hpp"
#include "vqdt/eigensolvers.hpp"
#include "vqdt/fermion.hpp"
#include "vqdt/oracle.hpp"

using namespace vqdt;
using Catch::Approx;

namespace {

Observable single_z() {
  Observable z(1);
  z.add_term(1.0, PauliString("Z"));
  return z;
}

Observable single_x() {
  Observable x(1);
  x.add_term(1.0, PauliString("X"));
  return x;
}

// two-site interacting-fermion fixture with the quadratic number pin; the
// three lowest Sz=0 levels of H + 4 Sz^2 are 1 - sqrt(5), 0, 2
Observable hubbard_dimer_penalized() {
  FermionOperator h(4);
  for (int s = 0; s < 2; ++s) {
    h.add_term(-1.0, {{s, true}, {s + 2, false}});
    h.add_term(-1.0, {{s + 2, true}, {s, false}});
  }
  h.add_term(2.0, {{0, true}, {0, false}, {1, true}, {1, false}});
  h.add_term(2.0, {{2, true}, {2, false}, {3, true}, {3, false}});
  const FermionOperator n = particle_number_op(4);
  FermionOperator penalty = 3.0 * (n * n + (-4.0) * n);
  FermionOperator shift(4);
  shift.add_term(12.0, {});
  const Observable hq = jordan_wigner(h + penalty + shift);
  return observable_scale_add(4.0, build_sz_squared(2), hq);
}

SolverOptions exact_opts(std::uint64_t seed, double tol = 1e-10,
                         int max_iters = 4000) {
  SolverOptions opts;
  opts.optimizer.max_iters = max_iters;
  opts.optimizer.rel_energy_tol = tol;
  opts.optimizer.seed = seed;
  return opts;
}

const Ansatz kRyAnsatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 1, 0}};

}  // namespace

TEST_CASE("vqe on single-qubit Hamiltonians") {
  SECTION("H = Z reaches -1") {
    const auto r = vqe(single_z(), kRyAnsatz, 0, exact_opts(3, 1e-10));
    CHECK(r.states[0].energy == Approx(-1.0).margin(1e-8));
  }
  SECTION("H = X reaches -1") {
    const auto r = vqe(single_x(), kRyAnsatz, 0, exact_opts(4, 1e-10));
    CHECK(r.states[0].energy == Approx(-1.0).margin(1e-8));
  }
  SECTION("qubit count mismatch rejected") {
    CHECK_THROWS_AS(vqe(Observable(2), kRyAnsatz, 0, exact_opts(1)),
                    std::invalid_argument);
  }
}

TEST_CASE("vqe respects the variational bound on the fermionic fixture") {
  const Observable h = hubbard_dimer_penalized();
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::RSP, 4, 8}};
  const auto r = vqe(h, ansatz, 0b0011, exact_opts(7, 1e-12, 6000));
  const auto spec = oracle::exact_eigensystem(h);
  CHECK(r.states[0].energy >= spec.eigenvalues(0) - 1e-9);
  CHECK(r.states[0].energy == Approx(spec.eigenvalues(0)).margin(1.6e-3));
}

TEST_CASE("ssvqe on H = Z recovers the full spectrum") {
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 1, 1}};
  const auto r = ssvqe(single_z(), ansatz, {0, 1}, {}, exact_opts(11, 1e-12));
  REQUIRE(r.states.size() == 2);
  CHECK(r.states[0].energy == Approx(-1.0).margin(1e-7));
  CHECK(r.states[1].energy == Approx(1.0).margin(1e-7));
  // unitary images of orthogonal references stay orthogonal
  CHECK(r.overlaps[0][1] == Approx(0.0).margin(1e-10));
}

TEST_CASE("ssvqe with k=1 follows the vqe trajectory") {
  const auto a = vqe(single_z(), kRyAnsatz, 0, exact_opts(13));
  const auto b = ssvqe(single_z(), kRyAnsatz, {0}, {}, exact_opts(13));
  REQUIRE(a.states[0].trace.costs.size() == b.states[0].trace.costs.size());
  for (size_t i = 0; i < a.states[0].trace.costs.size(); ++i) {
    REQUIRE(a.states[0].trace.costs[i] ==
            Approx(b.states[0].trace.costs[i]).margin(1e-12));
  }
}

TEST_CASE("ssvqe validates weights and references") {
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 1, 1}};
  CHECK_THROWS_AS(
      ssvqe(single_z(), ansatz, {0, 1}, {1.0, 1.0}, exact_opts(1)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ssvqe(single_z(), ansatz, {0, 1}, {1.0, 2.0}, exact_opts(1)),
      std::invalid_argument);
  CHECK_THROWS_AS(ssvqe(single_z(), ansatz, {1, 1}, {}, exact_opts(1)),
                  std::invalid_argument);
}

TEST_CASE("ssvqe weighted-sum optimum on the fermionic fixture") {
  const Observable h = hubbard_dimer_penalized();
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::RSP, 4, 8}};
  const std::vector<std::uint64_t> refs = {0b0011, 0b0110, 0b1001};
  const auto r = ssvqe(h, ansatz, refs, {}, exact_opts(17, 1e-12, 6000));
  const auto spec = oracle::exact_eigensystem(h);

  // the weighted sum at any parameters is bounded below by the oracle value
  const double loss = 3.0 * r.states[0].energy + 2.0 * r.states[1].energy +
                      1.0 * r.states[2].energy;
  const double oracle_loss = 3.0 * spec.eigenvalues(0) +
                             2.0 * spec.eigenvalues(1) +
                             1.0 * spec.eigenvalues(2);
  CHECK(loss >= oracle_loss - 1e-9);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.states[static_cast<size_t>(i)].energy ==
          Approx(spec.eigenvalues(i)).margin(1.6e-2));
  }
}

TEST_CASE("mcvqe with the identity circuit diagonalizes in the references") {
  // depth-0 TwoLocal at zero angles is the identity: references are basis
  // states and Htilde must be diag(<ref_i| H |ref_i>)
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 1, 0}};
  SolverOptions opts = exact_opts(19);
  opts.initial_params = std::vector<double>{0.0};
  opts.optimizer.max_iters = 1;
  const auto r = mcvqe(single_z(), ansatz, {0, 1}, opts);
  REQUIRE(r.states.size() == 2);
  CHECK(r.states[0].energy == Approx(-1.0).margin(1e-9));
  CHECK(r.states[1].energy == Approx(1.0).margin(1e-9));
  CHECK(r.subspace_h(0, 0) == Approx(1.0).margin(1e-9));   // <0|Z|0>
  CHECK(r.subspace_h(1, 1) == Approx(-1.0).margin(1e-9));  // <1|Z|1>
  CHECK(r.subspace_h(0, 1) == Approx(0.0).margin(1e-9));
}

TEST_CASE("mcvqe k=1 equals vqe") {
  const auto a = vqe(single_z(), kRyAnsatz, 0, exact_opts(23));
  const auto b = mcvqe(single_z(), kRyAnsatz, {0}, exact_opts(23));
  CHECK(b.subspace_h.rows() == 1);
  CHECK(a.states[0].energy == Approx(b.states[0].energy).margin(1e-9));
}

TEST_CASE("mcvqe on the fermionic fixture") {
  const Observable h = hubbard_dimer_penalized();
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::RSP, 4, 8}};
  const std::vector<std::uint64_t> refs = {0b0011, 0b0110, 0b1001};
  const auto r = mcvqe(h, ansatz, refs, exact_opts(29, 1e-12, 6000));
  const auto spec = oracle::exact_eigensystem(h);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.states[static_cast<size_t>(i)].energy ==
          Approx(spec.eigenvalues(i)).margin(1.6e-2));
  }

  SECTION("energies are invariant under reference reordering") {
    const std::vector<std::uint64_t> shuffled = {0b1001, 0b0011, 0b0110};
    const auto r2 = mcvqe(h, ansatz, shuffled, exact_opts(29, 1e-12, 6000));
    for (int i = 0; i < 3; ++i) {
      REQUIRE(r2.states[static_cast<size_t>(i)].energy ==
              Approx(r.states[static_cast<size_t>(i)].energy).margin(1e-6));
    }
  }
}

TEST_CASE("vqd on H = Z finds both states with tiny cross overlap") {
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 1, 1}};
  DeflationConfig deflation;
  deflation.beta = {4.0};
  const auto r = vqd(single_z(), ansatz, 2, deflation, {0},
                     exact_opts(31, 1e-12));
  REQUIRE(r.states.size() == 2);
  CHECK(r.states[0].energy == Approx(-1.0).margin(1e-6));
  CHECK(r.states[1].energy == Approx(1.0).margin(1e-6));
  CHECK(r.overlaps[0][1] < 1e-6);
  CHECK_FALSE(r.deflation_collapse);
}

TEST_CASE("vqd recovers the full spectrum of a diagonal 2-qubit operator") {
  Observable h(2);
  h.add_term(1.0, PauliString("ZI"));
  h.add_term(2.0, PauliString("IZ"));
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 2, 2}};
  const auto r =
      vqd(h, ansatz, 4, DeflationConfig{}, {0}, exact_opts(37, 1e-12, 6000));
  REQUIRE(r.states.size() == 4);
  const std::vector<double> expected = {-3.0, -1.0, 1.0, 3.0};
  for (size_t i = 0; i < 4; ++i) {
    CHECK(r.states[i].energy == Approx(expected[i]).margin(1e-6));
    for (size_t j = i + 1; j < 4; ++j) {
      CHECK(r.overlaps[i][j] < 1e-6);
    }
  }
}

TEST_CASE("vqd deflated cost at an earlier eigenstate equals E_i + beta") {
  // for exact eigenstates, <psi_i| H_j |psi_i> = E_i + beta_i; with beta
  // above the spectral range the deflated ground state is the next level
  Observable h(2);
  h.add_term(1.0, PauliString("ZI"));
  h.add_term(2.0, PauliString("IZ"));
  const auto spec = oracle::exact_eigensystem(h);
  const double beta = default_deflation_beta(h);
  CHECK(beta > spec.eigenvalues(3) - spec.eigenvalues(0));

  // ground state of h is |11> (index 3): deflated Hamiltonian cost there
  const StateVector ground(2, 3);
  const double cost = expectation(h, ground) +
                      beta * overlap_squared_direct(ground, ground);
  CHECK(cost == Approx(spec.eigenvalues(0) + beta).margin(1e-12));
}

TEST_CASE("vqd flags deflation collapse instead of silently accepting") {
  // beta far too small: the deflated minimum stays at the ground state
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 1, 1}};
  DeflationConfig deflation;
  deflation.beta = {1e-6};
  const auto r = vqd(single_z(), ansatz, 2, deflation, {0},
                     exact_opts(41, 1e-12));
  CHECK(r.deflation_collapse);
  REQUIRE_FALSE(r.collapsed_pairs.empty());
}

TEST_CASE("vqd chemical-accuracy run on the fermionic fixture") {
  const Observable h = hubbard_dimer_penalized();
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::RSP, 4, 8}};
  const std::vector<std::uint64_t> refs = {0b0011, 0b0110, 0b1001};
  const auto r = vqd(h, ansatz, 3, DeflationConfig{}, refs,
                     exact_opts(43, 1e-12, 6000));
  const auto spec = oracle::exact_eigensystem(h);
  REQUIRE(r.states.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.states[static_cast<size_t>(i)].energy ==
          Approx(spec.eigenvalues(i)).margin(1.6e-3));
    CHECK(r.states[static_cast<size_t>(i)].energy >=
          spec.eigenvalues(i) - 1e-9);
  }
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = i + 1; j < 3; ++j) {
      CHECK(r.overlaps[i][j] < 1e-4);
    }
  }
}

TEST_CASE("vqd overlap modes agree in exact mode") {
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 2, 2}};
  Observable h(2);
  h.add_term(1.0, PauliString("ZI"));
  h.add_term(0.5, PauliString("XX"));
  DeflationConfig direct;
  direct.overlap_mode = DeflationConfig::OverlapMode::Direct;
  DeflationConfig composed;
  composed.overlap_mode = DeflationConfig::OverlapMode::CircuitComposition;
  const auto r1 = vqd(h, ansatz, 2, direct, {0}, exact_opts(47, 1e-12));
  const auto r2 = vqd(h, ansatz, 2, composed, {0}, exact_opts(47, 1e-12));
  for (size_t i = 0; i < 2; ++i) {
    REQUIRE(r1.states[i].energy == Approx(r2.states[i].energy).margin(1e-9));
  }
}

TEST_CASE("sampled vqe stays within shot noise of the target") {
  Observable z = single_z();
  SolverOptions opts;
  opts.optimizer.method = OptimMethod::SPSA;
  opts.optimizer.max_iters = 300;
  opts.optimizer.seed = 53;
  opts.model.mode = EnergyModel::Mode::Sampled;
  opts.model.shots = 4096;
  opts.model.seed = 99;
  const auto r = vqe(z, kRyAnsatz, 0, opts);
  // evaluate the returned parameters exactly
  Circuit c(1);
  c.append(Gate::ry(0, r.states[0].params[0]));
  CHECK(expectation(z, run(c)) < -0.95);
}

TEST_CASE("reference generation: filled state plus spin-preserving singles") {
  const auto refs = hf_singles_references(4, 2, 3);
  REQUIRE(refs.size() == 3);
  CHECK(refs[0] == 0b0011);
  CHECK(refs[1] == 0b0110);  // mode 0 -> mode 2 (both spin up)
  CHECK(refs[2] == 0b1001);  // mode 1 -> mode 3 (both spin down)
  CHECK_THROWS_AS(hf_singles_references(4, 2, 20), std::invalid_argument);
  CHECK_THROWS_AS(hf_singles_references(4, 9, 1), std::invalid_argument);
}

TEST_CASE("variational bound holds across solvers on a random observable") {
  Rng rng(149);
  const Observable h =
      observable_normalize(testing::random_observable(2, 6, rng));
  if (h.empty()) return;
  const auto spec = oracle::exact_eigensystem(h);
  const Ansatz ansatz{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 2, 2}};
  const auto r = vqd(h, ansatz, 2, DeflationConfig{}, {0},
                     exact_opts(59, 1e-10));
  for (size_t i = 0; i < r.states.size(); ++i) {
    REQUIRE(r.states[i].energy >=
            spec.eigenvalues(static_cast<Eigen::Index>(i)) - 1e-9);
  }
}
