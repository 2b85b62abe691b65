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

#ifndef FOV_LTL_HPP_
#define FOV_LTL_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fov/executor.hpp"
#include "fov/model.hpp"

namespace fov {

/// LTL formulas share the expression tree with guards.
using Formula = Expr;

struct Verdict {
  bool holds = true;
  std::optional<int> violation;  // present iff !holds
  std::string note;
};

class UnboundedTrace : public std::runtime_error {
 public:
  UnboundedTrace() : std::runtime_error("trace has no loop position") {}
};

/// Parses a formula over the model's machines, modes, failures and inputs.
/// FTTI, WINDOW and DEBOUNCE are substituted in cycles from the timing.
Formula parse_formula(std::string_view text, const SystemModel& m);

/**
 * Evaluates at position 0 over the lasso obtained by repeating the loop
 * state forever. For a top-level G the reported position is the earliest
 * one where the operand fails.
 */
Verdict evaluate(const Formula& f, const SystemModel& m, const Trace& trace);

/// Truth value of `f` at every position 0..loop of the trace.
std::vector<char> evaluate_positions(const Formula& f, const SystemModel& m, const Trace& trace);

/// True iff both formulas get the same verdict on every trace.
bool equivalence_check(const Formula& f, const Formula& g, const SystemModel& m,
                       const std::vector<Trace>& traces);

enum class SpecScope { Always, Single, Double, Stop, Debounce };

std::string_view to_string(SpecScope s);

/**
 * A named stanza of a spec library. The text may hold placeholders that
 * are filled per failure case:
 *   %DETECT%  %DETECT1%  %DETECT2%  %CONDITION%  %TARGET%  %FAILURE%
 */
struct SpecTemplate {
  std::string name;
  SpecScope scope = SpecScope::Always;
  std::string text;
  int line = 0;
};

/// `spec NAME SCOPE` header lines followed by indented formula text.
std::vector<SpecTemplate> parse_spec_library(std::string_view text);
std::vector<SpecTemplate> load_spec_library(const std::string& path);

}  // namespace fov

#endif  // FOV_LTL_HPP_
