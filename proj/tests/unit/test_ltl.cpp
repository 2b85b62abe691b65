/*
 * Copyright (c) 2026, The fov authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include "fov/ltl.hpp"
#include "support.hpp"

using namespace fov;
using fov::testing::data_path;

namespace {

const SystemModel& duplex() {
  static const SystemModel m = load_model(data_path("toys/duplex.fom"));
  return m;
}

// Lasso whose only varying atom is signal Activation; `bits` holds its
// value per position and the last position repeats.
Trace signal_trace(const SystemModel& m, const std::string& bits) {
  Trace t;
  SystemState s = initial_state(m);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    s.cycle = static_cast<int>(i);
    s.inputs[0] = bits[i] == '1';
    t.states.push_back(s);
  }
  s.cycle = static_cast<int>(bits.size());
  t.states.push_back(s);
  t.loop = static_cast<int>(bits.size()) - 1;
  return t;
}

Verdict check(const std::string& f, const std::string& bits) {
  return evaluate(parse_formula(f, duplex()), duplex(), signal_trace(duplex(), bits));
}

}  // namespace

TEST_CASE("temporal operators on hand-built lassos") {
  CHECK(check("G Activation", "111").holds);
  CHECK_FALSE(check("G Activation", "1101").holds);
  CHECK(*check("G Activation", "1101").violation == 2);
  CHECK(check("F Activation", "0001").holds);
  CHECK_FALSE(check("F Activation", "0000").holds);
  CHECK(check("X X Activation", "001").holds);
  CHECK(check("X X X X Activation", "001").holds);  // loop state repeats
  CHECK(check("!Activation U Activation", "0001").holds);
  CHECK_FALSE(check("Activation U !Activation", "1111").holds);
  CHECK(check("G (Activation -> G [1,2] Activation)", "0111").holds);
  CHECK_FALSE(check("G (Activation -> G [1,2] Activation)", "01101").holds);
  CHECK(check("G (Activation -> F [2,3] !Activation)", "011100").holds);
  CHECK(check("G (O Activation -> O Activation)", "0100").holds);
  CHECK_FALSE(check("G (O Activation -> Activation)", "0100").holds);
  CHECK(check("G true", "0").holds);
}

TEST_CASE("earliest violation of the exclusive spec") {
  const SystemModel m = load_model(data_path("reference.fom"));
  const auto lib = load_spec_library(data_path("specs.fos"));
  const auto exclusive =
      std::find_if(lib.begin(), lib.end(), [](const SpecTemplate& t) { return t.name == "exclusive"; });
  REQUIRE(exclusive != lib.end());
  const Formula f = parse_formula(exclusive->text, m);

  FailureScenario sc;
  sc.inputs.resize(m.signals.size());
  sc.inputs[0] = Waveform::rising(m.timing.activation_cycle);
  Trace t = require_stationary(m, sc, m.timing.max_depth);
  CHECK(evaluate(f, m, t).holds);

  // Extend the stationary tail and raise a second mode flag from cycle 9.
  while (static_cast<int>(t.states.size()) < 12) t.states.push_back(t.states.back());
  for (std::size_t k = 0; k < t.states.size(); ++k) t.states[k].cycle = static_cast<int>(k);
  for (std::size_t k = 9; k < t.states.size(); ++k) t.states[k].modes[static_cast<std::size_t>(m.mode_index("FB1"))] = 1;
  t.loop = static_cast<int>(t.states.size()) - 2;
  const Verdict v = evaluate(f, m, t);
  CHECK_FALSE(v.holds);
  REQUIRE(v.violation.has_value());
  CHECK(*v.violation == 9);
}

TEST_CASE("formula laws on random lassos") {
  for (auto law : fov::testing::all_laws()) {
    CAPTURE(fov::testing::to_string(law));
    for (const char* rel : {"toys/duplex.fom", "reference.fom"}) {
      const SystemModel m = load_model(data_path(rel));
      const auto run = fov::testing::check_law(law, m, 99, 250);
      CAPTURE(run.first_counterexample);
      CHECK(run.traces == 250);
      CHECK(run.failures == 0);
    }
  }
}

TEST_CASE("equivalence check over traces") {
  const SystemModel& m = duplex();
  std::vector<Trace> traces{signal_trace(m, "0101"), signal_trace(m, "11"), signal_trace(m, "0")};
  CHECK(equivalence_check(parse_formula("G Activation", m), parse_formula("!F !Activation", m), m, traces));
  CHECK_FALSE(equivalence_check(parse_formula("G Activation", m), parse_formula("F Activation", m), m, traces));
}

TEST_CASE("formula parse errors") {
  const SystemModel& m = duplex();
  CHECK_THROWS_AS(parse_formula("G (", m), ModelError);
  CHECK_THROWS_AS(parse_formula("G [3,1] NO", m), ModelError);
  CHECK_THROWS_AS(parse_formula("Unknown", m), ModelError);
  CHECK_NOTHROW(parse_formula("G [FTTI-WINDOW, FTTI+WINDOW] NO", m));
  const Formula f = parse_formula("G [FTTI-WINDOW, FTTI+WINDOW] NO", m);
  CHECK(f.lo == m.timing.ftti_cycles() - m.timing.window);
  CHECK(f.hi == m.timing.ftti_cycles() + m.timing.window);
}

TEST_CASE("evaluation needs a loop position") {
  const SystemModel& m = duplex();
  Trace t = signal_trace(m, "01");
  t.loop.reset();
  CHECK_THROWS_AS(evaluate(parse_formula("G Activation", m), m, t), UnboundedTrace);
}

TEST_CASE("spec library parsing") {
  const auto lib = parse_spec_library(
      "# comment\n"
      "spec a always\n"
      "  G NO\n"
      "spec b stop\n"
      "  G (%CONDITION% -> F Inactive)\n");
  REQUIRE(lib.size() == 2);
  CHECK(lib[0].name == "a");
  CHECK(lib[1].scope == SpecScope::Stop);
  CHECK_THROWS(parse_spec_library("spec a sometimes\n  G NO\n"));
  CHECK_THROWS(parse_spec_library("spec a always\n  G NO\nspec a always\n  G NO\n"));
}
