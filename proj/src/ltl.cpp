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

#include "fov/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace fov {

Formula parse_formula(std::string_view text, const SystemModel& m) {
  ParseContext ctx{&m, true, true, 1};
  return parse_expr(text, ctx);
}

namespace {

using Op = Expr::Op;
using Bits = std::vector<char>;

class Evaluator {
 public:
  Evaluator(const SystemModel&, const Trace& t) : t_(t), last_(*t.loop) {}

  Bits eval(const Expr& e) const {
    const int n = last_ + 1;
    Bits out(n);
    switch (e.op) {
      case Op::True:
      case Op::False:
      case Op::StateIn:
      case Op::FailureActive:
      case Op::Debounce:
      case Op::Signal:
      case Op::ModeFlag:
        for (int i = 0; i < n; ++i) out[i] = atom(e, t_.states[i]);
        return out;
      case Op::Not: {
        Bits a = eval(e.args[0]);
        for (int i = 0; i < n; ++i) out[i] = !a[i];
        return out;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Xor: {
        Bits a = eval(e.args[0]), b = eval(e.args[1]);
        for (int i = 0; i < n; ++i) {
          switch (e.op) {
            case Op::And: out[i] = a[i] && b[i]; break;
            case Op::Or: out[i] = a[i] || b[i]; break;
            case Op::Implies: out[i] = !a[i] || b[i]; break;
            default: out[i] = (a[i] != 0) != (b[i] != 0); break;
          }
        }
        return out;
      }
      case Op::Next: {
        Bits a = eval(e.args[0]);
        for (int i = 0; i < n; ++i) out[i] = a[std::min(i + 1, last_)];
        return out;
      }
      case Op::Globally:
      case Op::Finally: {
        Bits a = eval(e.args[0]);
        const bool all = e.op == Op::Globally;
        out[last_] = a[last_];
        for (int i = last_ - 1; i >= 0; --i)
          out[i] = all ? (a[i] && out[i + 1]) : (a[i] || out[i + 1]);
        return out;
      }
      case Op::Until: {
        Bits a = eval(e.args[0]), b = eval(e.args[1]);
        out[last_] = b[last_];
        for (int i = last_ - 1; i >= 0; --i) out[i] = b[i] || (a[i] && out[i + 1]);
        return out;
      }
      case Op::BoundedGlobally:
      case Op::BoundedFinally: {
        Bits a = eval(e.args[0]);
        const bool all = e.op == Op::BoundedGlobally;
        for (int i = 0; i < n; ++i) {
          bool v = all;
          for (int j = i + e.lo; j <= i + e.hi; ++j) {
            bool x = a[std::min(j, last_)];
            if (all ? !x : x) {
              v = !all;
              break;
            }
            if (j >= last_) break;  // remaining positions repeat the loop state
          }
          out[i] = v;
        }
        return out;
      }
      case Op::Once: {
        Bits a = eval(e.args[0]);
        out[0] = a[0];
        for (int i = 1; i < n; ++i) out[i] = a[i] || out[i - 1];
        return out;
      }
    }
    return out;
  }

 private:
  bool atom(const Expr& e, const SystemState& s) const {
    switch (e.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::StateIn: return (e.mask >> static_cast<int>(s.machines[e.ref])) & 1u;
      case Op::FailureActive: return s.active[e.ref] != 0;
      case Op::Debounce: return compare(e.cmp, s.debounce[e.ref], e.value);
      case Op::Signal: return s.inputs[e.ref] != 0;
      case Op::ModeFlag: return s.modes[e.ref] != 0;
      default: return false;
    }
  }

  const Trace& t_;
  int last_;
};

}  // namespace

std::vector<char> evaluate_positions(const Formula& f, const SystemModel& m, const Trace& trace) {
  if (!trace.loop) throw UnboundedTrace();
  return Evaluator(m, trace).eval(f);
}

Verdict evaluate(const Formula& f, const SystemModel& m, const Trace& trace) {
  if (!trace.loop) throw UnboundedTrace();
  Evaluator ev(m, trace);
  Verdict v;
  if (f.op == Op::Globally) {
    Bits a = ev.eval(f.args[0]);
    auto it = std::find(a.begin(), a.end(), 0);
    if (it != a.end()) {
      v.holds = false;
      v.violation = static_cast<int>(it - a.begin());
      v.note = "operand of G fails";
    }
    return v;
  }
  Bits a = ev.eval(f);
  if (!a[0]) {
    v.holds = false;
    v.violation = 0;
    v.note = "formula fails at the initial position";
  }
  return v;
}

bool equivalence_check(const Formula& f, const Formula& g, const SystemModel& m,
                       const std::vector<Trace>& traces) {
  for (const auto& t : traces) {
    if (evaluate(f, m, t).holds != evaluate(g, m, t).holds) return false;
  }
  return true;
}

std::string_view to_string(SpecScope s) {
  switch (s) {
    case SpecScope::Always: return "always";
    case SpecScope::Single: return "single";
    case SpecScope::Double: return "double";
    case SpecScope::Stop: return "stop";
    case SpecScope::Debounce: return "debounce";
  }
  return "?";
}

std::vector<SpecTemplate> parse_spec_library(std::string_view text) {
  std::vector<SpecTemplate> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    if (std::isspace(static_cast<unsigned char>(line[0]))) {
      if (out.empty()) throw ModelError("formula text before any 'spec' header", line_no, 1);
      out.back().text += (out.back().text.empty() ? "" : "\n") + line;
      continue;
    }
    std::istringstream ws(line);
    std::string kw, name, scope, extra;
    ws >> kw >> name >> scope;
    if (kw != "spec" || name.empty() || scope.empty() || (ws >> extra))
      throw ModelError("expected 'spec NAME SCOPE'", line_no, 1);
    SpecTemplate t;
    t.name = name;
    t.line = line_no;
    if (scope == "always") t.scope = SpecScope::Always;
    else if (scope == "single") t.scope = SpecScope::Single;
    else if (scope == "double") t.scope = SpecScope::Double;
    else if (scope == "stop") t.scope = SpecScope::Stop;
    else if (scope == "debounce") t.scope = SpecScope::Debounce;
    else throw ModelError("unknown spec scope '" + scope + "'", line_no, 1);
    for (const auto& prev : out)
      if (prev.name == name) throw ModelError("duplicate spec '" + name + "'", line_no, 1);
    out.push_back(std::move(t));
  }
  for (const auto& t : out)
    if (t.text.empty()) throw ModelError("spec '" + t.name + "' has no formula", t.line, 1);
  return out;
}

std::vector<SpecTemplate> load_spec_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_library(ss.str());
}

}  // namespace fov
