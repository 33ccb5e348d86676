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

TEST_CASE("observable_to_matrix basics") {
  SECTION("Z is diag(1, -1)") {
    Observable z(1);
    z.add_term(1.0, PauliString("Z"));
    const Eigen::MatrixXcd m = oracle::observable_to_matrix(z);
    CHECK(m(0, 0).real() == Approx(1.0));
    CHECK(m(1, 1).real() == Approx(-1.0));
    CHECK(std::abs(m(0, 1)) < 1e-15);
  }
  SECTION("XI + IX against a hand-built Kronecker sum") {
    Observable o(2);
    o.add_term(1.0, PauliString("XI"));
    o.add_term(1.0, PauliString("IX"));
    const Eigen::MatrixXcd m = oracle::observable_to_matrix(o);
    // qubit 0 is the least significant bit: XI couples index pairs (0,1),
    // (2,3); IX couples (0,2), (1,3)
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected(0, 1) = expected(1, 0) = 1.0;
    expected(2, 3) = expected(3, 2) = 1.0;
    expected(0, 2) = expected(2, 0) = 1.0;
    expected(1, 3) = expected(3, 1) = 1.0;
    CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("eigendecomposition reconstructs the matrix") {
    Rng rng(131);
    const Observable o = testing::random_observable(4, 10, rng);
    const Eigen::MatrixXcd m = oracle::observable_to_matrix(o);
    const auto spec = oracle::exact_eigensystem(o);
    const Eigen::MatrixXcd rebuilt =
        spec.eigenvectors * spec.eigenvalues.asDiagonal() *
        spec.eigenvectors.adjoint();
    CHECK((m - rebuilt).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("qubit cap enforced") {
    CHECK_THROWS_AS(oracle::observable_to_matrix(Observable(13)),
                    std::invalid_argument);
  }
}

TEST_CASE("matrix construction is linear") {
  Rng rng(137);
  const Observable x = testing::random_observable(3, 6, rng);
  const Observable y = testing::random_observable(3, 6, rng);
  const Eigen::MatrixXcd lhs =
      oracle::observable_to_matrix(observable_scale_add(0.7, x, y));
  const Eigen::MatrixXcd rhs = 0.7 * oracle::observable_to_matrix(x) +
                               oracle::observable_to_matrix(y);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact_eigensystem") {
  SECTION("H = Z gives (-1, +1)") {
    Observable z(1);
    z.add_term(1.0, PauliString("Z"));
    const auto spec = oracle::exact_eigensystem(z);
    CHECK(spec.eigenvalues(0) == Approx(-1.0));
    CHECK(spec.eigenvalues(1) == Approx(1.0));
  }
  SECTION("XX + ZZ has the hand-diagonalizable spectrum {-2, 0, 0, 2}") {
    // blocks: {|00>, |11>} with diag +1 coupling +1 -> {0, 2};
    // {|01>, |10>} with diag -1 coupling +1 -> {-2, 0}
    Observable o(2);
    o.add_term(1.0, PauliString("XX"));
    o.add_term(1.0, PauliString("ZZ"));
    const auto spec = oracle::exact_eigensystem(o);
    CHECK(spec.eigenvalues(0) == Approx(-2.0));
    CHECK(spec.eigenvalues(1) == Approx(0.0).margin(1e-12));
    CHECK(spec.eigenvalues(2) == Approx(0.0).margin(1e-12));
    CHECK(spec.eigenvalues(3) == Approx(2.0));
  }
  SECTION("orthonormal eigenvectors and small residuals") {
    Rng rng(139);
    const Observable o = testing::random_observable(4, 12, rng);
    const Eigen::MatrixXcd m = oracle::observable_to_matrix(o);
    const auto spec = oracle::exact_eigensystem(o);
    const Eigen::MatrixXcd id =
        Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    CHECK((spec.eigenvectors.adjoint() * spec.eigenvectors - id)
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
      const Eigen::VectorXcd r =
          m * spec.eigenvectors.col(i) -
          spec.eigenvalues(i) * spec.eigenvectors.col(i);
      REQUIRE(r.cwiseAbs().maxCoeff() < 1e-8 * scale);
    }
  }
  SECTION("degenerate states reorder by descending Sz^2 label") {
    // Sz on one orbital: eigenvalues {-1/2, 0, 0, 1/2}; for H = Sz^2 the
    // degenerate pair at 1/4 has Sz^2 = 1/4 and the pair at 0 has 0
    const Observable sz2 = build_sz_squared(1);
    oracle::SpectrumLabelOps labels;
    labels.sz2 = sz2;
    const auto spec = oracle::exact_eigensystem(sz2, labels);
    REQUIRE(spec.sz2.size() == 4);
    CHECK(spec.sz2[0] == Approx(0.0).margin(1e-12));
    CHECK(spec.sz2[1] == Approx(0.0).margin(1e-12));
    CHECK(spec.sz2[2] == Approx(0.25));
    CHECK(spec.sz2[3] == Approx(0.25));
  }
}

TEST_CASE("exact_transition_amplitude") {
  SECTION("identity between orthogonal vectors is 0") {
    Observable id(1);
    id.add_term(1.0, PauliString("I"));
    Eigen::VectorXcd v0(2), v1(2);
    v0 << 1.0, 0.0;
    v1 << 0.0, 1.0;
    CHECK(std::abs(oracle::exact_transition_amplitude(id, v0, v1)) < 1e-15);
  }
  SECTION("<0|X|1> = 1") {
    Observable x(1);
    x.add_term(1.0, PauliString("X"));
    Eigen::VectorXcd v0(2), v1(2);
    v0 << 1.0, 0.0;
    v1 << 0.0, 1.0;
    CHECK(oracle::exact_transition_amplitude(x, v0, v1).real() ==
          Approx(1.0));
  }
  SECTION("dimension mismatch rejected") {
    Observable x(2);
    x.add_term(1.0, PauliString("XI"));
    Eigen::VectorXcd v(2);
    v << 1.0, 0.0;
    CHECK_THROWS_AS(oracle::exact_transition_amplitude(x, v, v),
                    std::invalid_argument);
  }
}
