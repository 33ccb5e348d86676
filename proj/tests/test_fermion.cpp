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

#include "helpers.hpp"
#include "vqdt/fermion.hpp"
#include "vqdt/oracle.hpp"

using namespace vqdt;
using Catch::Approx;

namespace {

// Fock-space matrix of a single ladder operator under the occupation-number
// convention used by the mapping: basis index bit p = occupation of mode p,
// with the sign rule a_p |...n_p...> = (-1)^{sum_{q<p} n_q} ... .
Eigen::MatrixXcd ladder_matrix(int n_modes, int mode, bool creation) {
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const bool occupied = (x >> mode) & 1;
    if (creation == occupied) continue;
    const Eigen::Index y = x ^ (Eigen::Index{1} << mode);
    int parity = 0;
    for (int q = 0; q < mode; ++q) parity += static_cast<int>((x >> q) & 1);
    m(y, x) = (parity & 1) ? -1.0 : 1.0;
  }
  return m;
}

Eigen::MatrixXcd fock_matrix(const FermionOperator& f) {
  const Eigen::Index dim = Eigen::Index{1} << f.n_modes;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : f.terms) {
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& factor : t.factors) {
      term = term * ladder_matrix(f.n_modes, factor.mode, factor.creation);
    }
    m += t.coefficient * term;
  }
  return m;
}

}  // namespace

TEST_CASE("jordan_wigner of the single-mode number operator") {
  FermionOperator f(1);
  f.add_term(1.0, {{0, true}, {0, false}});
  const Observable o = jordan_wigner(f);
  REQUIRE(o.size() == 2);
  CHECK(o.terms()[0].string == PauliString("I"));
  CHECK(o.terms()[0].coefficient == Approx(0.5));
  CHECK(o.terms()[1].string == PauliString("Z"));
  CHECK(o.terms()[1].coefficient == Approx(-0.5));
}

TEST_CASE("jordan_wigner hopping term matches the Fock-space oracle") {
  FermionOperator f(2);
  f.add_term(1.0, {{1, true}, {0, false}});
  f.add_term(1.0, {{0, true}, {1, false}});
  const Observable o = jordan_wigner(f);

  Observable expected(2);
  expected.add_term(0.5, PauliString("XX"));
  expected.add_term(0.5, PauliString("YY"));
  CHECK(o == observable_normalize(expected));

  const Eigen::MatrixXcd lhs = oracle::observable_to_matrix(o);
  const Eigen::MatrixXcd rhs = fock_matrix(f);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("jordan_wigner annihilates doubled creation operators") {
  FermionOperator f(1);
  f.add_term(0.7, {{0, true}, {0, true}});
  CHECK(jordan_wigner(f).empty());
}

TEST_CASE("jordan_wigner rejects non-Hermitian input and bad modes") {
  FermionOperator lop(2);
  lop.add_term(1.0, {{1, true}, {0, false}});  // missing conjugate
  CHECK_THROWS_AS(jordan_wigner(lop), std::invalid_argument);

  FermionOperator bad(1);
  bad.add_term(1.0, {{3, true}, {3, false}});
  CHECK_THROWS_AS(jordan_wigner(bad), std::invalid_argument);
}

TEST_CASE("jordan_wigner matches the Fock oracle on random Hermitian operators") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.bits() % 2);
    FermionOperator f(n);
    for (int t = 0; t < 3; ++t) {
      const int p = static_cast<int>(rng.bits() % static_cast<unsigned>(n));
      const int q = static_cast<int>(rng.bits() % static_cast<unsigned>(n));
      const double c = rng.uniform(-1.0, 1.0);
      f.add_term(c, {{p, true}, {q, false}});
      f.add_term(c, {{q, true}, {p, false}});
    }
    const Observable o = jordan_wigner(f);
    const Eigen::MatrixXcd lhs = oracle::observable_to_matrix(o);
    const Eigen::MatrixXcd rhs = fock_matrix(f);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("mapped ladder operators keep their anticommutators") {
  // {a_p, a^_q} = delta_pq, {a_p, a_q} = 0, checked at matrix level through
  // the mapping of each single factor
  const int n = 3;
  auto mapped = [&](int mode, bool creation) {
    // dense matrix of the mapped ladder operator, built from its definition
    const Eigen::MatrixXcd x =
        oracle::pauli_string_matrix(PauliString::single(n, mode, 'X'));
    const Eigen::MatrixXcd y =
        oracle::pauli_string_matrix(PauliString::single(n, mode, 'Y'));
    Eigen::MatrixXcd chain =
        Eigen::MatrixXcd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int q = 0; q < mode; ++q) {
      chain = chain *
              oracle::pauli_string_matrix(PauliString::single(n, q, 'Z'));
    }
    const cdouble iy = creation ? cdouble{0.0, -1.0} : cdouble{0.0, 1.0};
    return (chain * (x + iy * y) / 2.0).eval();
  };
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const Eigen::MatrixXcd ap = mapped(p, false);
      const Eigen::MatrixXcd aqd = mapped(q, true);
      const Eigen::MatrixXcd anti = ap * aqd + aqd * ap;
      const Eigen::MatrixXcd expected =
          (p == q)
              ? Eigen::MatrixXcd::Identity(anti.rows(), anti.cols()).eval()
              : Eigen::MatrixXcd::Zero(anti.rows(), anti.cols()).eval();
      REQUIRE((anti - expected).cwiseAbs().maxCoeff() < 1e-12);

      const Eigen::MatrixXcd aq = mapped(q, false);
      const Eigen::MatrixXcd anti2 = ap * aq + aq * ap;
      REQUIRE(anti2.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("particle number operator maps to (n/2) I - (1/2) sum Z_p") {
  const int n = 4;
  const Observable o = jordan_wigner(particle_number_op(n));
  Observable expected(n);
  expected.add_term(n / 2.0, PauliString::identity(n));
  for (int p = 0; p < n; ++p) {
    expected.add_term(-0.5, PauliString::single(n, p, 'Z'));
  }
  CHECK(o == observable_normalize(expected));
}

TEST_CASE("build_sz for one spatial orbital") {
  const Observable sz = build_sz(1);
  Observable expected(2);
  expected.add_term(-0.25, PauliString("ZI"));
  expected.add_term(0.25, PauliString("IZ"));
  CHECK(sz == observable_normalize(expected));
}

TEST_CASE("build_sz eigenvalues on two qubits are {-1/2, 0, +1/2}") {
  const auto spec = oracle::exact_eigensystem(build_sz(1));
  CHECK(spec.eigenvalues(0) == Approx(-0.5));
  CHECK(spec.eigenvalues(1) == Approx(0.0).margin(1e-12));
  CHECK(spec.eigenvalues(2) == Approx(0.0).margin(1e-12));
  CHECK(spec.eigenvalues(3) == Approx(0.5));
}

TEST_CASE("build_sz is additive over orbitals") {
  const Observable sz2o = build_sz(2);
  // one orbital block per spatial index
  Observable expected(4);
  expected.add_term(-0.25, PauliString("ZIII"));
  expected.add_term(0.25, PauliString("IZII"));
  expected.add_term(-0.25, PauliString("IIZI"));
  expected.add_term(0.25, PauliString("IIIZ"));
  CHECK(sz2o == observable_normalize(expected));
}

TEST_CASE("build_sz_squared") {
  SECTION("only I/Z strings") {
    const Observable o = build_sz_squared(2);
    for (const auto& t : o.terms()) {
      REQUIRE(t.string.x_mask() == 0);
    }
  }
  SECTION("eigenvalues on one orbital are {0, 1/4}") {
    const auto spec = oracle::exact_eigensystem(build_sz_squared(1));
    CHECK(spec.eigenvalues(0) == Approx(0.0).margin(1e-12));
    CHECK(spec.eigenvalues(1) == Approx(0.0).margin(1e-12));
    CHECK(spec.eigenvalues(2) == Approx(0.25));
    CHECK(spec.eigenvalues(3) == Approx(0.25));
  }
  SECTION("equals the matrix square of build_sz") {
    for (int orbitals : {1, 2}) {
      const Eigen::MatrixXcd sz =
          oracle::observable_to_matrix(build_sz(orbitals));
      const Eigen::MatrixXcd sz2 =
          oracle::observable_to_matrix(build_sz_squared(orbitals));
      REQUIRE((sz * sz - sz2).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("positive semidefinite on random states") {
    Rng rng(37);
    const Observable o = build_sz_squared(2);
    const Eigen::MatrixXcd m = oracle::observable_to_matrix(o);
    for (int trial = 0; trial < 100; ++trial) {
      const auto v = testing::to_eigen(testing::random_state(4, rng));
      REQUIRE((v.adjoint() * m * v)(0, 0).real() >= -1e-12);
    }
  }
}

TEST_CASE("build_s_squared") {
  SECTION("one-orbital spectrum from hand-enumerated Fock states") {
    // |vac> and |up,down> are singlets (0); the two single-electron states
    // carry s = 1/2, i.e. s(s+1) = 3/4
    const auto spec = oracle::exact_eigensystem(build_s_squared(1));
    CHECK(spec.eigenvalues(0) == Approx(0.0).margin(1e-10));
    CHECK(spec.eigenvalues(1) == Approx(0.0).margin(1e-10));
    CHECK(spec.eigenvalues(2) == Approx(0.75));
    CHECK(spec.eigenvalues(3) == Approx(0.75));
  }
  SECTION("two-orbital spectrum contains the triplet value 2") {
    const auto spec = oracle::exact_eigensystem(build_s_squared(2));
    double max_ev = spec.eigenvalues(spec.eigenvalues.size() - 1);
    CHECK(max_ev == Approx(2.0));
    // every eigenvalue is s(s+1) for s in {0, 1/2, 1}
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
      const double ev = spec.eigenvalues(i);
      const bool ok = std::abs(ev) < 1e-9 || std::abs(ev - 0.75) < 1e-9 ||
                      std::abs(ev - 2.0) < 1e-9;
      REQUIRE(ok);
    }
  }
  SECTION("positive semidefinite on random states") {
    Rng rng(41);
    const Eigen::MatrixXcd m =
        oracle::observable_to_matrix(build_s_squared(2));
    for (int trial = 0; trial < 100; ++trial) {
      const auto v = testing::to_eigen(testing::random_state(4, rng));
      REQUIRE((v.adjoint() * m * v)(0, 0).real() >= -1e-10);
    }
  }
  SECTION("commutes with build_sz") {
    const Eigen::MatrixXcd s2 =
        oracle::observable_to_matrix(build_s_squared(2));
    const Eigen::MatrixXcd sz = oracle::observable_to_matrix(build_sz(2));
    CHECK((s2 * sz - sz * s2).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Sz=0 spectrum is untouched by the Sz^2 penalty") {
  // the two-site interacting-fermion fixture commutes with Sz
  FermionOperator h(4);
  for (int s = 0; s < 2; ++s) {
    h.add_term(-1.0, {{s, true}, {s + 2, false}});
    h.add_term(-1.0, {{s + 2, true}, {s, false}});
  }
  h.add_term(2.0, {{0, true}, {0, false}, {1, true}, {1, false}});
  h.add_term(2.0, {{2, true}, {2, false}, {3, true}, {3, false}});
  const Observable hq = jordan_wigner(h);
  const Observable sz = build_sz(2);
  const Observable sz2 = build_sz_squared(2);

  // eigenvalues of H restricted to the Sz = 0 eigenspace
  const Eigen::MatrixXcd hm = oracle::observable_to_matrix(hq);
  const Eigen::MatrixXcd szm = oracle::observable_to_matrix(sz);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sz_eig(szm);
  std::vector<Eigen::Index> zero_cols;
  for (Eigen::Index i = 0; i < sz_eig.eigenvalues().size(); ++i) {
    if (std::abs(sz_eig.eigenvalues()(i)) < 1e-9) zero_cols.push_back(i);
  }
  Eigen::MatrixXcd basis(hm.rows(), static_cast<Eigen::Index>(zero_cols.size()));
  for (size_t i = 0; i < zero_cols.size(); ++i) {
    basis.col(static_cast<Eigen::Index>(i)) = sz_eig.eigenvectors().col(zero_cols[i]);
  }

  auto sector_spectrum = [&](const Observable& op) {
    const Eigen::MatrixXcd m = oracle::observable_to_matrix(op);
    const Eigen::MatrixXcd sub = basis.adjoint() * m * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sub);
    return eig.eigenvalues().eval();
  };

  const Eigen::VectorXd base = sector_spectrum(hq);
  for (double alpha : {1.0, 4.0, 16.0}) {
    const Eigen::VectorXd penalized =
        sector_spectrum(observable_scale_add(alpha, sz2, hq));
    REQUIRE((penalized - base).cwiseAbs().maxCoeff() < 1e-10);
  }
}
