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

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqdt/optim.hpp"
#include "vqdt/statevector.hpp"

namespace vqdt {

enum class AnsatzFamily { RSP, TwoLocalRyCz };

/**
 * Parameterized circuit families.
 *
 * RSP: D layers, each applying one exchange block to every adjacent qubit
 * pair (0,1), (1,2), ..., (n-2, n-1) in ascending order. Each block
 * conserves the number of set bits and is real, so the ansatz preserves the
 * particle number of a basis reference and produces real-valued amplitudes.
 * The exchange block (a subspace reflection, not a Givens rotation) is what
 * lets the ladder leave the free-fermion manifold and represent correlated
 * states; a rotation-only ladder maps determinants to determinants and
 * cannot reach them. At all-zero angles the circuit fixes every basis state
 * up to sign. Parameter count D*(n-1), consumed layer by layer.
 *
 * TwoLocalRyCz: an initial RY layer on all qubits, then D repetitions of a
 * CZ ladder (0,1), (1,2), ... followed by another RY layer. Parameter count
 * n*(D+1), consumed in layer order, qubit-ascending within a layer.
 */
struct AnsatzSpec {
  AnsatzFamily family = AnsatzFamily::RSP;
  int n = 0;
  int depth = 0;

  int parameter_count() const {
    switch (family) {
      case AnsatzFamily::RSP:
        return depth * (n - 1);
      case AnsatzFamily::TwoLocalRyCz:
        return n * (depth + 1);
    }
    return 0;
  }
};

inline Circuit build_rsp(const AnsatzSpec& spec, std::span<const double> params) {
  if (spec.family != AnsatzFamily::RSP) {
    throw std::invalid_argument("build_rsp: wrong ansatz family");
  }
  if (static_cast<int>(params.size()) != spec.parameter_count()) {
    throw std::invalid_argument("build_rsp: wrong parameter count");
  }
  Circuit c(spec.n);
  size_t k = 0;
  for (int layer = 0; layer < spec.depth; ++layer) {
    for (int q = 0; q + 1 < spec.n; ++q) {
      c.append(Gate::exchange(q, q + 1, params[k++]));
    }
  }
  return c;
}

inline Circuit build_two_local(const AnsatzSpec& spec,
                               std::span<const double> params) {
  if (spec.family != AnsatzFamily::TwoLocalRyCz) {
    throw std::invalid_argument("build_two_local: wrong ansatz family");
  }
  if (static_cast<int>(params.size()) != spec.parameter_count()) {
    throw std::invalid_argument("build_two_local: wrong parameter count");
  }
  Circuit c(spec.n);
  size_t k = 0;
  for (int q = 0; q < spec.n; ++q) c.append(Gate::ry(q, params[k++]));
  for (int layer = 0; layer < spec.depth; ++layer) {
    for (int q = 0; q + 1 < spec.n; ++q) c.append(Gate::cz(q, q + 1));
    for (int q = 0; q < spec.n; ++q) c.append(Gate::ry(q, params[k++]));
  }
  return c;
}

/// Bound builder: circuit construction plus the per-parameter shift rules
/// the gradient machinery needs.
struct Ansatz {
  AnsatzSpec spec;

  Circuit build(std::span<const double> params) const {
    switch (spec.family) {
      case AnsatzFamily::RSP:
        return build_rsp(spec, params);
      case AnsatzFamily::TwoLocalRyCz:
        return build_two_local(spec, params);
    }
    throw std::logic_error("unknown ansatz family");
  }

  std::vector<ShiftRule> shift_rules() const {
    const ShiftRule rule = spec.family == AnsatzFamily::RSP
                               ? ShiftRule::two_frequency()
                               : ShiftRule::standard();
    return std::vector<ShiftRule>(static_cast<size_t>(spec.parameter_count()),
                                  rule);
  }
};

inline AnsatzFamily ansatz_family_from_string(const std::string& name) {
  if (name == "rsp") return AnsatzFamily::RSP;
  if (name == "twolocal") return AnsatzFamily::TwoLocalRyCz;
  throw std::invalid_argument("unknown ansatz family: " + name);
}

inline std::string to_string(AnsatzFamily f) {
  return f == AnsatzFamily::RSP ? "rsp" : "twolocal";
}

}  // namespace vqdt
