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

#include "fov/executor.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace fov {

bool Waveform::at(int cycle) const {
  bool v = false;
  for (int e : edges) {
    if (e > cycle) break;
    v = !v;
  }
  return v;
}

int FailureScenario::last_event() const {
  int last = 0;
  for (const auto& o : onsets) last = std::max(last, o.cycle);
  for (const auto& w : inputs)
    if (!w.edges.empty()) last = std::max(last, w.edges.back());
  return last;
}

int FailureScenario::onset_of(int failure) const {
  for (const auto& o : onsets)
    if (o.failure == failure) return o.cycle;
  return -1;
}

bool FailureScenario::input(int signal, int cycle) const {
  return signal < static_cast<int>(inputs.size()) && inputs[signal].at(cycle);
}

namespace {

using Op = Expr::Op;

// Failure flags and counters for cycle t.
void failure_status(const SystemModel& m, const FailureScenario& sc, int t,
                    std::vector<std::uint8_t>& active, std::vector<std::uint8_t>& counter) {
  const std::size_t nf = m.failures.size();
  active.assign(nf, 0);
  counter.assign(nf, 0);
  for (const auto& o : sc.onsets) {
    if (o.cycle > t) continue;
    active[o.failure] = 1;
    counter[o.failure] =
        static_cast<std::uint8_t>(std::min(t - o.cycle, m.failures[o.failure].debounce));
  }
}

bool expired(const SystemModel& m, const std::vector<std::uint8_t>& active,
             const std::vector<std::uint8_t>& counter, int f) {
  const Failure& fl = m.failures[f];
  return active[f] && fl.debounced() && counter[f] >= fl.debounce;
}

struct GuardView {
  const SystemModel& m;
  int owner;
  const std::vector<Observed>& delivered;
  const std::vector<std::uint8_t>& active;
  const std::vector<std::uint8_t>& counter;
  const std::vector<std::uint8_t>& inputs;
};

bool eval_guard(const Expr& e, const GuardView& v) {
  switch (e.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::StateIn: {
      int l = v.m.link_between(e.ref, v.owner);
      if (l < 0)
        throw std::logic_error(v.m.machines[v.owner].name + " observes " +
                               v.m.machines[e.ref].name + " without a link");
      return (e.mask >> v.delivered[l]) & 1u;
    }
    case Op::FailureActive: return v.active[e.ref] != 0;
    case Op::Debounce: return compare(e.cmp, v.counter[e.ref], e.value);
    case Op::Signal: return v.inputs[e.ref] != 0;
    case Op::Not: return !eval_guard(e.args[0], v);
    case Op::And: return eval_guard(e.args[0], v) && eval_guard(e.args[1], v);
    case Op::Or: return eval_guard(e.args[0], v) || eval_guard(e.args[1], v);
    case Op::Implies: return !eval_guard(e.args[0], v) || eval_guard(e.args[1], v);
    case Op::Xor: return eval_guard(e.args[0], v) != eval_guard(e.args[1], v);
    default: throw std::logic_error("temporal operator in guard");
  }
}

bool eval_state_predicate(const Expr& e, const std::vector<MachineState>& ms) {
  switch (e.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::StateIn: return (e.mask >> static_cast<int>(ms[e.ref])) & 1u;
    case Op::Not: return !eval_state_predicate(e.args[0], ms);
    case Op::And: return eval_state_predicate(e.args[0], ms) && eval_state_predicate(e.args[1], ms);
    case Op::Or: return eval_state_predicate(e.args[0], ms) || eval_state_predicate(e.args[1], ms);
    case Op::Implies: return !eval_state_predicate(e.args[0], ms) || eval_state_predicate(e.args[1], ms);
    case Op::Xor: return eval_state_predicate(e.args[0], ms) != eval_state_predicate(e.args[1], ms);
    default: throw std::logic_error("mode predicate must be over machine states");
  }
}

void check_scenario(const FailureScenario& sc) {
  if (sc.onsets.size() > 2) throw std::invalid_argument("scenario holds more than two failures");
  for (const auto& o : sc.onsets)
    if (o.cycle < 0) throw std::invalid_argument("negative failure onset");
}

}  // namespace

std::vector<std::uint8_t> evaluate_modes(const SystemModel& m,
                                         const std::vector<MachineState>& machines) {
  std::vector<std::uint8_t> out(m.modes.size());
  for (std::size_t i = 0; i < m.modes.size(); ++i)
    out[i] = eval_state_predicate(m.modes[i].predicate, machines) ? 1 : 0;
  return out;
}

SystemState initial_state(const SystemModel& m) { return initial_state(m, FailureScenario{}); }

SystemState initial_state(const SystemModel& m, const FailureScenario& sc) {
  check_scenario(sc);
  SystemState s;
  s.cycle = 0;
  s.machines.assign(m.machines.size(), MachineState::Init);
  s.delivered.assign(m.links.size(), static_cast<Observed>(MachineState::Init));
  failure_status(m, sc, 0, s.active, s.debounce);
  s.inputs.resize(m.signals.size());
  for (std::size_t i = 0; i < m.signals.size(); ++i) s.inputs[i] = sc.input(static_cast<int>(i), 0);
  s.modes.assign(m.modes.size(), 0);
  return s;
}

SystemState step(const SystemModel& m, const SystemState& s, const FailureScenario& sc) {
  SystemState n;
  n.cycle = s.cycle + 1;
  failure_status(m, sc, n.cycle, n.active, n.debounce);

  n.delivered.resize(m.links.size());
  for (std::size_t l = 0; l < m.links.size(); ++l) {
    bool silent = false;
    for (int f : m.link_triggers(static_cast<int>(l)))
      if (expired(m, n.active, n.debounce, f)) silent = true;
    n.delivered[l] = silent ? kNoSignal : static_cast<Observed>(s.machines[m.links[l].sender]);
  }

  n.machines = s.machines;
  for (std::size_t mi = 0; mi < m.machines.size(); ++mi) {
    bool down = false;
    for (int f : m.shutdown_triggers(static_cast<int>(mi)))
      if (expired(m, n.active, n.debounce, f)) down = true;
    if (down) {
      n.machines[mi] = MachineState::Failure;
      continue;
    }
    GuardView view{m, static_cast<int>(mi), n.delivered, n.active, n.debounce, s.inputs};
    for (const auto& tr : m.machines[mi].transitions) {
      if (tr.source == s.machines[mi] && eval_guard(tr.guard, view)) {
        n.machines[mi] = tr.target;
        break;
      }
    }
  }

  n.inputs.resize(m.signals.size());
  for (std::size_t i = 0; i < m.signals.size(); ++i) n.inputs[i] = sc.input(static_cast<int>(i), n.cycle);
  n.modes = evaluate_modes(m, n.machines);
  return n;
}

Trace simulate(const SystemModel& m, const FailureScenario& sc, int max_depth) {
  Trace t;
  t.states.push_back(initial_state(m, sc));
  const int quiet = sc.last_event();
  for (int k = 1; k <= max_depth; ++k) {
    t.states.push_back(step(m, t.states.back(), sc));
    const auto& prev = t.states[t.states.size() - 2];
    if (k - 1 >= quiet && prev.same_configuration(t.states.back())) {
      t.loop = k - 1;
      break;
    }
  }
  return t;
}

Trace require_stationary(const SystemModel& m, const FailureScenario& sc, int max_depth) {
  Trace t = simulate(m, sc, max_depth);
  if (!t.loop) throw NoStationaryState(max_depth);
  return t;
}

std::optional<int> find_stationary(const Trace& trace, int quiet_from) {
  const auto& st = trace.states;
  if (st.size() < 2) return std::nullopt;
  int L = static_cast<int>(st.size()) - 1;
  while (L > 0 && st[L - 1].same_configuration(st.back())) --L;
  if (L == static_cast<int>(st.size()) - 1) return std::nullopt;
  L = std::max(L, quiet_from);
  if (L >= static_cast<int>(st.size()) - 1) return std::nullopt;
  return L;
}

std::string dump_trace_text(const SystemModel& m, const Trace& t) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "cycle";
  for (const auto& mach : m.machines) os << std::setw(9) << mach.name;
  os << "modes / active failures\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const SystemState& s = t.states[i];
    os << std::setw(6) << s.cycle;
    for (auto ms : s.machines) os << std::setw(9) << to_string(ms);
    bool any = false;
    for (std::size_t k = 0; k < m.modes.size(); ++k)
      if (s.modes[k]) os << (any ? "," : "") << m.modes[k].name, any = true;
    if (!any) os << "-";
    for (std::size_t f = 0; f < m.failures.size(); ++f)
      if (s.active[f]) os << ' ' << m.failures[f].name << '(' << int(s.debounce[f]) << ')';
    if (t.loop && static_cast<int>(i) == *t.loop) os << "  <- loop";
    os << '\n';
  }
  return os.str();
}

std::string dump_trace_json(const SystemModel& m, const Trace& t) {
  nlohmann::ordered_json j;
  j["loop"] = t.loop ? nlohmann::ordered_json(*t.loop) : nlohmann::ordered_json(nullptr);
  auto& states = j["states"] = nlohmann::ordered_json::array();
  for (const auto& s : t.states) {
    nlohmann::ordered_json js;
    js["cycle"] = s.cycle;
    for (std::size_t i = 0; i < m.machines.size(); ++i)
      js["machines"][m.machines[i].name] = std::string(to_string(s.machines[i]));
    js["modes"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.modes.size(); ++i)
      if (s.modes[i]) js["modes"].push_back(m.modes[i].name);
    js["failures"] = nlohmann::ordered_json::object();
    for (std::size_t f = 0; f < m.failures.size(); ++f)
      if (s.active[f]) js["failures"][m.failures[f].name] = s.debounce[f];
    js["inputs"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < m.signals.size(); ++i) js["inputs"][m.signals[i]] = s.inputs[i] != 0;
    states.push_back(std::move(js));
  }
  return j.dump(2);
}

}  // namespace fov
