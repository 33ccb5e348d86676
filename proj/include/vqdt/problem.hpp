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
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqdt/pauli.hpp"

namespace vqdt {

/**
 * Operator file format.
 *
 * A problem file is a sequence of named operator sections, each a list of
 * `coefficient pauli-string` lines:
 *
 *     # comments and blank lines are ignored
 *     [hamiltonian]
 *     -0.81 II
 *     0.17  ZI
 *     [dipole_x]
 *     0.35  XI
 *
 * Lines before any section header belong to `hamiltonian`. Pauli strings
 * use one character of {I, X, Y, Z} per qubit with qubit 0 leftmost; all
 * sections must share one qubit count. Recognized sections are
 * `hamiltonian` (required), `dipole_x`, `dipole_y`, `dipole_z`, and the
 * penalty operators `penalty_sz2_alpha` and `penalty_s2_beta`, which hold
 * the bare Sz^2 / S^2 operators; the multipliers alpha and beta come from
 * the run configuration.
 */
struct ProblemFile {
  int n = 0;
  std::map<std::string, Observable> sections;

  const Observable& hamiltonian() const { return sections.at("hamiltonian"); }

  bool has(const std::string& name) const { return sections.count(name) > 0; }

  bool has_dipoles() const {
    return has("dipole_x") && has("dipole_y") && has("dipole_z");
  }

  std::array<Observable, 3> dipoles() const {
    if (!has_dipoles()) {
      throw std::invalid_argument("problem file has no dipole sections");
    }
    return {sections.at("dipole_x"), sections.at("dipole_y"),
            sections.at("dipole_z")};
  }
};

class ProblemParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& problem_section_names() {
  static const std::vector<std::string> names = {
      "hamiltonian",       "dipole_x",         "dipole_y",
      "dipole_z",          "penalty_sz2_alpha", "penalty_s2_beta"};
  return names;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline ProblemFile parse_problem_stream(std::istream& in) {
  ProblemFile out;
  std::map<std::string, std::vector<PauliTerm>> raw;
  std::string current = "hamiltonian";
  bool current_open = false;  // an explicit header has been seen for current
  int expected_len = -1;

  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ProblemParseError(msg + " at line " + std::to_string(line_no));
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;

    if (t.front() == '[') {
      if (t.back() != ']') fail("malformed section header '" + t + "'");
      const std::string name = detail::trim(t.substr(1, t.size() - 2));
      bool known = false;
      for (const auto& s : problem_section_names()) {
        if (s == name) known = true;
      }
      if (!known) fail("unknown section '" + name + "'");
      if (raw.count(name) > 0 || (name == "hamiltonian" && current_open)) {
        fail("duplicate section '" + name + "'");
      }
      // opening a named section after implicit hamiltonian lines is fine,
      // but re-opening hamiltonian that already has implicit lines is not
      if (name == "hamiltonian" && raw.count("hamiltonian") > 0) {
        fail("duplicate section 'hamiltonian'");
      }
      current = name;
      current_open = (name == "hamiltonian");
      raw[name];  // materialize so emptiness is detectable
      continue;
    }

    std::istringstream ls(t);
    std::string coeff_tok, pauli_tok, extra;
    ls >> coeff_tok >> pauli_tok;
    if (pauli_tok.empty()) fail("expected 'coefficient pauli-string'");
    if (ls >> extra) fail("trailing token '" + extra + "'");

    double coeff = 0.0;
    const auto res = std::from_chars(
        coeff_tok.data(), coeff_tok.data() + coeff_tok.size(), coeff);
    if (res.ec != std::errc() || res.ptr != coeff_tok.data() + coeff_tok.size() ||
        !std::isfinite(coeff)) {
      fail("non-numeric coefficient '" + coeff_tok + "'");
    }

    for (char c : pauli_tok) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        fail(std::string("invalid Pauli character '") + c + "'");
      }
    }
    if (expected_len < 0) {
      expected_len = static_cast<int>(pauli_tok.size());
    } else if (static_cast<int>(pauli_tok.size()) != expected_len) {
      fail("inconsistent Pauli string length (expected " +
           std::to_string(expected_len) + ", got " +
           std::to_string(pauli_tok.size()) + ")");
    }
    raw[current].push_back({coeff, PauliString(pauli_tok)});
  }

  if (raw.count("hamiltonian") == 0 || raw.at("hamiltonian").empty()) {
    throw ProblemParseError("missing required section 'hamiltonian'");
  }
  if (expected_len <= 0) {
    throw ProblemParseError("no operator terms found");
  }

  out.n = expected_len;
  for (auto& [name, terms] : raw) {
    out.sections[name] =
        observable_normalize(Observable(out.n, std::move(terms)));
  }
  return out;
}

inline ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw ProblemParseError("cannot open problem file: " + path);
  }
  try {
    return parse_problem_stream(f);
  } catch (const ProblemParseError& e) {
    throw ProblemParseError(path + ": " + e.what());
  }
}

/// Canonical text form: fixed section order, normalized terms, full-precision
/// coefficients. parse(write(p)) reproduces p exactly.
inline void write_problem_stream(std::ostream& os, const ProblemFile& p,
                                 const std::string& header_comment = "") {
  if (!header_comment.empty()) {
    std::istringstream hc(header_comment);
    std::string line;
    while (std::getline(hc, line)) os << "# " << line << "\n";
  }
  os.precision(17);
  for (const auto& name : problem_section_names()) {
    const auto it = p.sections.find(name);
    if (it == p.sections.end()) continue;
    os << "[" << name << "]\n";
    for (const auto& t : it->second.terms()) {
      os << t.coefficient << " " << t.string.ops() << "\n";
    }
  }
}

inline void write_problem_file(const std::string& path, const ProblemFile& p,
                               const std::string& header_comment = "") {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  write_problem_stream(f, p, header_comment);
}

}  // namespace vqdt
