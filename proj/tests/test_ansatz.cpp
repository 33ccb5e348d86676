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
#include "vqdt/ansatz.hpp"

using namespace vqdt;
using Catch::Approx;

namespace {

std::vector<double> random_params(const AnsatzSpec& spec, Rng& rng) {
  std::vector<double> p(static_cast<size_t>(spec.parameter_count()));
  for (auto& v : p) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

int hamming_weight(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace

TEST_CASE("parameter counts match the published circuit sizes") {
  CHECK(AnsatzSpec{AnsatzFamily::RSP, 12, 10}.parameter_count() == 110);
  CHECK(AnsatzSpec{AnsatzFamily::RSP, 8, 20}.parameter_count() == 140);
  CHECK(AnsatzSpec{AnsatzFamily::RSP, 6, 10}.parameter_count() == 50);
  CHECK(AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 2, 4}.parameter_count() == 10);
}

TEST_CASE("build_rsp rejects wrong parameter counts") {
  const AnsatzSpec spec{AnsatzFamily::RSP, 4, 2};
  std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(build_rsp(spec, wrong), std::invalid_argument);
}

TEST_CASE("RSP with zero angles fixes every basis reference up to sign") {
  // the exchange block at zero angle reflects |10| subspaces, so the zero
  // circuit is diagonal with entries +-1: each basis state maps to itself
  // as a physical state
  const AnsatzSpec spec{AnsatzFamily::RSP, 4, 3};
  const std::vector<double> zeros(static_cast<size_t>(spec.parameter_count()),
                                  0.0);
  const Circuit c = build_rsp(spec, zeros);
  for (std::uint64_t ref = 0; ref < 16; ++ref) {
    const StateVector s = run(c, ref);
    REQUIRE(std::norm(s.amp[ref]) == Approx(1.0));
  }
}

TEST_CASE("RSP preserves particle number exactly") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.bits() % 5);  // up to 6
    const int depth = 1 + static_cast<int>(rng.bits() % 4);
    const AnsatzSpec spec{AnsatzFamily::RSP, n, depth};
    const auto params = random_params(spec, rng);
    const std::uint64_t ref = rng.bits() % (std::uint64_t{1} << n);
    const StateVector s = run(build_rsp(spec, params), ref);
    const int w = hamming_weight(ref);
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
      if (hamming_weight(x) != w) {
        REQUIRE(std::norm(s.amp[x]) == 0.0);  // exact, not approximate
      }
    }
  }
}

TEST_CASE("RSP amplitudes are real for real references") {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.bits() % 4);
    const int depth = 1 + static_cast<int>(rng.bits() % 4);
    const AnsatzSpec spec{AnsatzFamily::RSP, n, depth};
    const auto params = random_params(spec, rng);
    const std::uint64_t ref = rng.bits() % (std::uint64_t{1} << n);
    const StateVector s = run(build_rsp(spec, params), ref);
    REQUIRE(s.max_imag() < 1e-10);
  }
}

TEST_CASE("two_local layer structure") {
  SECTION("no entanglers at depth zero") {
    const AnsatzSpec spec{AnsatzFamily::TwoLocalRyCz, 2, 0};
    const std::vector<double> params = {std::numbers::pi, 0.0};
    const StateVector s = run(build_two_local(spec, params));
    // RY(pi) on qubit 0, RY(0) on qubit 1: basis state with only bit 0 set
    CHECK(std::norm(s.amp[1]) == Approx(1.0));
  }
  SECTION("wrong parameter count rejected") {
    const AnsatzSpec spec{AnsatzFamily::TwoLocalRyCz, 3, 2};
    std::vector<double> wrong(5, 0.0);
    CHECK_THROWS_AS(build_two_local(spec, wrong), std::invalid_argument);
  }
  SECTION("depth-one circuit matches a direct matrix product") {
    Rng rng(107);
    const AnsatzSpec spec{AnsatzFamily::TwoLocalRyCz, 3, 1};
    const auto params = random_params(spec, rng);
    const Circuit c = build_two_local(spec, params);
    const Eigen::MatrixXcd u = testing::circuit_matrix(c);

    // same structure assembled gate by gate from dense 2x2 / CZ factors
    Circuit manual(3);
    manual.append(Gate::ry(0, params[0]));
    manual.append(Gate::ry(1, params[1]));
    manual.append(Gate::ry(2, params[2]));
    manual.append(Gate::cz(0, 1));
    manual.append(Gate::cz(1, 2));
    manual.append(Gate::ry(0, params[3]));
    manual.append(Gate::ry(1, params[4]));
    manual.append(Gate::ry(2, params[5]));
    const Eigen::MatrixXcd expected = testing::circuit_matrix(manual);
    CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("ansatz builder dispatch and shift rules") {
  const Ansatz rsp{AnsatzSpec{AnsatzFamily::RSP, 4, 2}};
  const Ansatz two{AnsatzSpec{AnsatzFamily::TwoLocalRyCz, 4, 2}};
  CHECK(rsp.shift_rules().size() == 6);
  CHECK(rsp.shift_rules()[0].terms.size() == 2);
  CHECK(two.shift_rules().size() == 12);
  CHECK(two.shift_rules()[0].terms.size() == 1);
  Rng rng(109);
  const auto p = random_params(rsp.spec, rng);
  CHECK(rsp.build(p).gates.size() == 6);
}
