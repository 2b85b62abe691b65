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

// Deliberately naive second implementation of the verifier. Nothing here
// calls into the executor or the formula evaluator.

#include <algorithm>
#include <chrono>
#include <map>

#include "fov/verifier.hpp"

namespace fov {
namespace {

using Op = Expr::Op;

struct Snapshot {
  std::vector<int> machines;               // MachineState as int
  std::map<std::pair<int, int>, int> seen;  // (sender, receiver) -> observed value
  std::vector<int> active;
  std::vector<int> counter;
  std::vector<int> inputs;
  std::vector<int> modes;

  bool operator==(const Snapshot&) const = default;
};

struct World {
  const SystemModel& m;
  std::vector<std::pair<int, int>> onsets;  // (failure, cycle)
  std::vector<int> activation_edge, deactivation_edge;  // per signal, -1 if never

  bool failure_on(int f, int t) const {
    for (auto [fi, c] : onsets)
      if (fi == f && c <= t) return true;
    return false;
  }
  int failure_count(int f, int t) const {
    for (auto [fi, c] : onsets)
      if (fi == f && c <= t) return std::min(t - c, m.failures[f].debounce);
    return 0;
  }
  bool takes_effect(int f, int t) const {
    const Failure& fl = m.failures[f];
    if (fl.kind == FailureKind::Function) return false;
    for (auto [fi, c] : onsets)
      if (fi == f && t - c >= fl.debounce) return true;
    return false;
  }
  bool powered_by(int f, int machine) const {
    const Failure& fl = m.failures[f];
    if (fl.kind != FailureKind::PowerCircuit && fl.kind != FailureKind::PowerModule) return false;
    const auto& ms = m.power[fl.target].machines;
    return std::find(ms.begin(), ms.end(), machine) != ms.end();
  }
  bool machine_dead(int machine, int t) const {
    for (int f = 0; f < static_cast<int>(m.failures.size()); ++f) {
      const Failure& fl = m.failures[f];
      bool hits = (fl.kind == FailureKind::Ecu && fl.target == machine) || powered_by(f, machine);
      if (hits && takes_effect(f, t)) return true;
    }
    return false;
  }
  bool link_dead(int l, int t) const {
    const Link& ln = m.links[l];
    for (int f = 0; f < static_cast<int>(m.failures.size()); ++f) {
      const Failure& fl = m.failures[f];
      bool hits = (fl.kind == FailureKind::Link && fl.target == l) ||
                  (fl.kind == FailureKind::Bus && fl.target == ln.bus) ||
                  (fl.kind == FailureKind::Ecu && (fl.target == ln.sender || fl.target == ln.receiver)) ||
                  powered_by(f, ln.sender) || powered_by(f, ln.receiver);
      if (hits && takes_effect(f, t)) return true;
    }
    return false;
  }
  int input(int s, int t) const {
    int v = 0;
    if (activation_edge[s] >= 0 && t >= activation_edge[s]) v = 1;
    if (deactivation_edge[s] >= 0 && t >= deactivation_edge[s]) v = 1;
    return v;
  }
};

bool holds_mask(std::uint8_t mask, int value) { return (mask >> value) & 1u; }

bool cmp(CmpOp op, int a, int b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

bool guard(const Expr& e, int owner, const Snapshot& next, const Snapshot& prev) {
  switch (e.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::StateIn: {
      auto it = next.seen.find({e.ref, owner});
      if (it == next.seen.end()) throw std::logic_error("guard reads a machine without a link");
      return holds_mask(e.mask, it->second);
    }
    case Op::FailureActive: return next.active[e.ref] != 0;
    case Op::Debounce: return cmp(e.cmp, next.counter[e.ref], e.value);
    case Op::Signal: return prev.inputs[e.ref] != 0;
    case Op::Not: return !guard(e.args[0], owner, next, prev);
    case Op::And: return guard(e.args[0], owner, next, prev) && guard(e.args[1], owner, next, prev);
    case Op::Or: return guard(e.args[0], owner, next, prev) || guard(e.args[1], owner, next, prev);
    case Op::Implies: return !guard(e.args[0], owner, next, prev) || guard(e.args[1], owner, next, prev);
    case Op::Xor: return guard(e.args[0], owner, next, prev) != guard(e.args[1], owner, next, prev);
    default: throw std::logic_error("temporal operator in guard");
  }
}

bool mode_pred(const Expr& e, const std::vector<int>& ms) {
  switch (e.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::StateIn: return holds_mask(e.mask, ms[e.ref]);
    case Op::Not: return !mode_pred(e.args[0], ms);
    case Op::And: return mode_pred(e.args[0], ms) && mode_pred(e.args[1], ms);
    case Op::Or: return mode_pred(e.args[0], ms) || mode_pred(e.args[1], ms);
    case Op::Implies: return !mode_pred(e.args[0], ms) || mode_pred(e.args[1], ms);
    case Op::Xor: return mode_pred(e.args[0], ms) != mode_pred(e.args[1], ms);
    default: throw std::logic_error("non-propositional mode predicate");
  }
}

Snapshot first(const World& w) {
  const SystemModel& m = w.m;
  Snapshot s;
  s.machines.assign(m.machines.size(), static_cast<int>(MachineState::Init));
  for (const Link& l : m.links) s.seen[{l.sender, l.receiver}] = static_cast<int>(MachineState::Init);
  for (int f = 0; f < static_cast<int>(m.failures.size()); ++f) {
    s.active.push_back(w.failure_on(f, 0));
    s.counter.push_back(w.failure_count(f, 0));
  }
  for (int i = 0; i < static_cast<int>(m.signals.size()); ++i) s.inputs.push_back(w.input(i, 0));
  s.modes.assign(m.modes.size(), 0);
  return s;
}

Snapshot advance(const World& w, const Snapshot& prev, int t) {
  const SystemModel& m = w.m;
  Snapshot s;
  for (int f = 0; f < static_cast<int>(m.failures.size()); ++f) {
    s.active.push_back(w.failure_on(f, t));
    s.counter.push_back(w.failure_count(f, t));
  }
  for (int l = 0; l < static_cast<int>(m.links.size()); ++l) {
    const Link& ln = m.links[l];
    s.seen[{ln.sender, ln.receiver}] = w.link_dead(l, t) ? kNoSignal : prev.machines[ln.sender];
  }
  s.machines = prev.machines;
  for (int i = 0; i < static_cast<int>(m.machines.size()); ++i) {
    if (w.machine_dead(i, t)) {
      s.machines[i] = static_cast<int>(MachineState::Failure);
      continue;
    }
    for (const Transition& tr : m.machines[i].transitions)
      if (static_cast<int>(tr.source) == prev.machines[i] && guard(tr.guard, i, s, prev)) {
        s.machines[i] = static_cast<int>(tr.target);
        break;
      }
  }
  for (int i = 0; i < static_cast<int>(m.signals.size()); ++i) s.inputs.push_back(w.input(i, t));
  for (const ModeDef& md : m.modes) s.modes.push_back(mode_pred(md.predicate, s.machines));
  return s;
}

// Formula semantics by recursion over the explicit prefix 0..last. The
// suffix from the loop position on is constant, so every position past
// `last` behaves like `last` itself.
struct Unrolled {
  const std::vector<Snapshot>& w;
  int last;

  int at(int i) const { return std::min(i, last); }

  bool sat(const Expr& e, int i) const {
    const Snapshot& s = w[at(i)];
    switch (e.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::StateIn: return holds_mask(e.mask, s.machines[e.ref]);
      case Op::FailureActive: return s.active[e.ref] != 0;
      case Op::Debounce: return cmp(e.cmp, s.counter[e.ref], e.value);
      case Op::Signal: return s.inputs[e.ref] != 0;
      case Op::ModeFlag: return s.modes[e.ref] != 0;
      case Op::Not: return !sat(e.args[0], i);
      case Op::And: return sat(e.args[0], i) && sat(e.args[1], i);
      case Op::Or: return sat(e.args[0], i) || sat(e.args[1], i);
      case Op::Implies: return !sat(e.args[0], i) || sat(e.args[1], i);
      case Op::Xor: return sat(e.args[0], i) != sat(e.args[1], i);
      case Op::Next: return sat(e.args[0], at(i + 1));
      case Op::Globally:
        for (int j = at(i); j <= last; ++j)
          if (!sat(e.args[0], j)) return false;
        return true;
      case Op::Finally:
        for (int j = at(i); j <= last; ++j)
          if (sat(e.args[0], j)) return true;
        return false;
      case Op::Until:
        for (int j = at(i); j <= last; ++j) {
          if (sat(e.args[1], j)) return true;
          if (!sat(e.args[0], j)) return false;
        }
        return false;
      case Op::BoundedGlobally:
        for (int j = i + e.lo; j <= i + e.hi; ++j)
          if (!sat(e.args[0], at(j))) return false;
        return true;
      case Op::BoundedFinally:
        for (int j = i + e.lo; j <= i + e.hi; ++j)
          if (sat(e.args[0], at(j))) return true;
        return false;
      case Op::Once:
        for (int j = 0; j <= at(i); ++j)
          if (sat(e.args[0], j)) return true;
        return false;
    }
    return false;
  }

  // Earliest failing position of a top-level G, or of position 0.
  std::optional<int> violation(const Expr& f) const {
    if (f.op == Op::Globally) {
      for (int j = 0; j <= last; ++j)
        if (!sat(f.args[0], j)) return j;
      return std::nullopt;
    }
    if (!sat(f, 0)) return 0;
    return std::nullopt;
  }
};

}  // namespace

CaseResult oracle_verify(const SystemModel& m, const CaseSpecs& cs, const VerifyConfig& cfg) {
  cfg.check();
  const auto start = std::chrono::steady_clock::now();
  const TimingConfig& tc = cfg.timing;
  CaseResult r;
  r.c = cs.c;
  r.id = m.failures[cs.c.primary].name;
  if (cs.c.secondary) r.id += "+" + m.failures[*cs.c.secondary].name;
  r.target = cs.target;

  std::vector<ScenarioRef> refs;
  for (Phasing p : cfg.phasings)
    for (int a = 0; a <= tc.horizon; ++a) {
      if (!cs.c.secondary) refs.push_back({p, a, std::nullopt});
      else
        for (int b = a; b <= tc.horizon; ++b) refs.push_back({p, a, b});
    }

  for (const ScenarioRef& ref : refs) {
    ++r.scenarios_checked;
    const int shift = ref.phasing == Phasing::Early ? 0 : tc.late_offset;
    World w{m, {}, {}, {}};
    const Failure& fa = m.failures[cs.c.primary];
    const int da = fa.kind == FailureKind::Function ? 0 : fa.debounce;
    if (!cs.c.secondary) {
      w.onsets.push_back({cs.c.primary, ref.t1 + shift});
    } else {
      const Failure& fb = m.failures[*cs.c.secondary];
      const int db = fb.kind == FailureKind::Function ? 0 : fb.debounce;
      // both failures take effect at t + shift + max(da, db)
      w.onsets.push_back({cs.c.primary, ref.t1 + shift + std::max(da, db) - da});
      w.onsets.push_back({*cs.c.secondary, *ref.t2 + shift + std::max(da, db) - db});
    }
    w.activation_edge.assign(m.signals.size(), -1);
    w.deactivation_edge.assign(m.signals.size(), -1);
    for (int i = 0; i < static_cast<int>(m.signals.size()); ++i) {
      if (m.signals[i] == "Activation") w.activation_edge[i] = tc.activation_cycle;
      if (m.signals[i] == "Deactivation" && ref.phasing == Phasing::Deact)
        w.deactivation_edge[i] = tc.deactivation_cycle;
    }
    int quiet = 0;
    for (auto [f, c] : w.onsets) quiet = std::max(quiet, c);
    for (int i = 0; i < static_cast<int>(m.signals.size()); ++i)
      quiet = std::max({quiet, w.activation_edge[i], w.deactivation_edge[i]});

    std::vector<Snapshot> states{first(w)};
    for (int t = 1; t <= tc.max_depth; ++t) states.push_back(advance(w, states.back(), t));
    int loop = -1;
    for (int k = 1; k <= tc.max_depth; ++k)
      if (k - 1 >= quiet && states[k - 1] == states[k]) {
        loop = k - 1;
        break;
      }
    if (loop < 0) {
      r.verdict = VerdictKind::EngineError;
      r.error = "no stationary state within " + std::to_string(tc.max_depth) + " cycles";
      r.scenario = ref;
      break;
    }
    for (int k = loop + 1; k <= tc.max_depth; ++k)
      if (!(states[k] == states[loop])) throw std::logic_error("oracle: suffix is not constant");

    Unrolled u{states, loop};
    auto check = [&](const std::vector<InstantiatedSpec>& specs) -> std::optional<std::pair<std::string, int>> {
      for (const auto& s : specs)
        if (auto v = u.violation(s.formula)) return std::make_pair(s.name, *v);
      return std::nullopt;
    };
    auto bad = check(cs.specs);
    if (bad && cs.c.secondary && cs.swapped_target != cs.target && !check(cs.swapped_specs)) {
      // Ordered only if the primary alone had already come to rest
      // before the secondary took effect.
      const Failure& fb = m.failures[*cs.c.secondary];
      const int second_effect = w.onsets[1].second + (fb.kind == FailureKind::Function ? 0 : fb.debounce);
      World alone{m, {w.onsets[0]}, w.activation_edge, w.deactivation_edge};
      Snapshot a = first(alone);
      for (int k = 1; k <= tc.max_depth; ++k) a = advance(alone, a, k);
      const bool ordered = second_effect > 0 && states[second_effect - 1].machines == a.machines;
      if (!ordered) bad.reset();
    }
    if (bad && r.verdict == VerdictKind::Pass) {
      r.verdict = VerdictKind::Violation;
      r.spec = bad->first;
      r.position = bad->second;
      r.scenario = ref;
      if (cfg.short_circuit) break;
    }
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace fov
