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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fov/model.hpp"

namespace fov {

ModelError::ModelError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + msg
                                  : msg),
      line_(line),
      column_(column) {}

std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::Function: return "function";
    case FailureKind::Ecu: return "ecu";
    case FailureKind::Link: return "link";
    case FailureKind::Bus: return "bus";
    case FailureKind::PowerCircuit: return "circuit";
    case FailureKind::PowerModule: return "module";
  }
  return "?";
}

int TimingConfig::ftti_cycles() const {
  if (cycle_ms <= 0) throw ModelError("cycle_ms must be positive");
  if (ftti_ms % cycle_ms != 0)
    throw ModelError("FTTI of " + std::to_string(ftti_ms) +
                     " ms is not an integer number of " +
                     std::to_string(cycle_ms) + " ms cycles");
  return ftti_ms / cycle_ms;
}

std::optional<std::string> TimingConfig::check() const {
  if (cycle_ms <= 0) return "cycle_ms must be positive";
  if (ftti_ms <= 0) return "ftti_ms must be positive";
  if (ftti_ms % cycle_ms != 0) return "ftti_ms is not a multiple of cycle_ms";
  if (window < 0) return "window must be non-negative";
  if (debounce <= 0) return "debounce must be positive";
  if (horizon < 0) return "horizon must be non-negative";
  int ftti = ftti_ms / cycle_ms;
  if (window > ftti) return "window exceeds FTTI";
  int last_event = std::max(late_offset + horizon, deactivation_cycle);
  if (max_depth < last_event + ftti + window + debounce)
    return "max_depth " + std::to_string(max_depth) +
           " is below the last onset plus FTTI window and debounce (" +
           std::to_string(last_event + ftti + window + debounce) + ")";
  return std::nullopt;
}

// --------------------------------------------------------------------------
// Lookups

namespace {

template <class T>
int find_named(const std::vector<T>& v, std::string_view n) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].name == n) return static_cast<int>(i);
  return -1;
}

}  // namespace

int SystemModel::machine_index(std::string_view n) const { return find_named(machines, n); }
int SystemModel::failure_index(std::string_view n) const { return find_named(failures, n); }
int SystemModel::mode_index(std::string_view n) const { return find_named(modes, n); }
int SystemModel::link_index(std::string_view n) const { return find_named(links, n); }
int SystemModel::bus_index(std::string_view n) const { return find_named(buses, n); }
int SystemModel::power_index(std::string_view n) const { return find_named(power, n); }
int SystemModel::signal_index(std::string_view n) const {
  auto it = std::find(signals.begin(), signals.end(), n);
  return it == signals.end() ? -1 : static_cast<int>(it - signals.begin());
}

void SystemModel::finalize() {
  const std::size_t n = machines.size();
  link_matrix_.assign(n * n, -1);
  for (std::size_t l = 0; l < links.size(); ++l)
    link_matrix_[links[l].sender * n + links[l].receiver] = static_cast<int>(l);

  link_triggers_.assign(links.size(), {});
  shutdown_triggers_.assign(n, {});
  auto supplied = [&](int p, int machine) {
    const auto& ms = power[p].machines;
    return std::find(ms.begin(), ms.end(), machine) != ms.end();
  };
  for (std::size_t f = 0; f < failures.size(); ++f) {
    const Failure& fl = failures[f];
    const int fi = static_cast<int>(f);
    for (std::size_t l = 0; l < links.size(); ++l) {
      const Link& ln = links[l];
      bool hit = false;
      switch (fl.kind) {
        case FailureKind::Function: break;
        case FailureKind::Ecu: hit = ln.sender == fl.target || ln.receiver == fl.target; break;
        case FailureKind::Link: hit = static_cast<int>(l) == fl.target; break;
        case FailureKind::Bus: hit = ln.bus == fl.target; break;
        case FailureKind::PowerCircuit:
        case FailureKind::PowerModule:
          hit = supplied(fl.target, ln.sender) || supplied(fl.target, ln.receiver);
          break;
      }
      if (hit) link_triggers_[l].push_back(fi);
    }
    if (fl.kind == FailureKind::Ecu) shutdown_triggers_[fl.target].push_back(fi);
    if (fl.kind == FailureKind::PowerCircuit || fl.kind == FailureKind::PowerModule)
      for (int mach : power[fl.target].machines) shutdown_triggers_[mach].push_back(fi);
  }
}

// --------------------------------------------------------------------------
// Parser

namespace {

struct Statement {
  std::string text;  // continuation lines joined with '\n'
  int line;
};

std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    std::string line(raw.substr(0, raw.find('#')));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = std::all_of(line.begin(), line.end(),
                             [](unsigned char c) { return std::isspace(c); });
    bool continuation = !line.empty() && std::isspace(static_cast<unsigned char>(line[0]));
    if (blank) {
      // keep line accounting inside a continued statement
      if (!out.empty() && continuation) out.back().text += '\n';
      continue;
    }
    if (continuation && !out.empty()) {
      // pad so the expression lexer reports correct line numbers
      int missing = line_no - out.back().line -
                    static_cast<int>(std::count(out.back().text.begin(), out.back().text.end(), '\n'));
      out.back().text.append(static_cast<std::size_t>(std::max(missing, 0)), '\n');
      out.back().text += line;
      continue;
    }
    out.push_back(Statement{line, line_no});
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

MachineState parse_state(const std::string& w, int line) {
  auto v = parse_observed(w);
  if (!v || *v == kNoSignal) throw ModelError("unknown machine state '" + w + "'", line, 1);
  return static_cast<MachineState>(*v);
}

struct PendingLink {
  std::string name, sender, receiver, bus;
  int line;
};
struct PendingPower {
  std::string name;
  PowerKind kind;
  std::vector<std::string> machines;
  int line;
};
struct PendingFailure {
  std::string name, kind, target;
  int debounce;  // -1: timing default
  int line;
};
struct PendingRule {
  std::string head;  // text before ':'
  std::string body;  // expression text after ':'
  int line;
  int body_line;
};

std::pair<std::string, std::string> key_value(const std::string& w, int line) {
  auto eq = w.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ModelError("expected key=value, got '" + w + "'", line, 1);
  return {w.substr(0, eq), w.substr(eq + 1)};
}

int to_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ModelError("expected integer, got '" + v + "'", line, 1);
  }
}

PendingRule split_rule(const Statement& st) {
  auto colon = st.text.find(':');
  if (colon == std::string::npos) throw ModelError("expected ':' before expression", st.line, 1);
  int body_line = st.line + static_cast<int>(std::count(st.text.begin(), st.text.begin() + colon, '\n'));
  return PendingRule{st.text.substr(0, colon), st.text.substr(colon + 1), st.line, body_line};
}

}  // namespace

SystemModel parse_model(std::string_view text) {
  SystemModel m;
  std::set<std::string> names;
  auto declare = [&](const std::string& n, int line) {
    if (!names.insert(n).second) throw ModelError("duplicate declaration of '" + n + "'", line, 1);
  };

  std::vector<PendingLink> links;
  std::vector<PendingPower> powers;
  std::vector<PendingFailure> failures;
  std::vector<PendingRule> transitions, modes;

  for (const Statement& st : split_statements(text)) {
    auto w = words(st.text);
    const std::string& kw = w[0];
    auto need = [&](std::size_t n) {
      if (w.size() < n) throw ModelError("incomplete '" + kw + "' declaration", st.line, 1);
    };
    if (kw == "model") {
      need(2);
      m.name = w[1];
    } else if (kw == "timing") {
      for (std::size_t i = 1; i < w.size(); ++i) {
        auto [k, v] = key_value(w[i], st.line);
        int x = to_int(v, st.line);
        if (k == "cycle_ms") m.timing.cycle_ms = x;
        else if (k == "ftti_ms") m.timing.ftti_ms = x;
        else if (k == "window") m.timing.window = x;
        else if (k == "debounce") m.timing.debounce = x;
        else if (k == "horizon") m.timing.horizon = x;
        else if (k == "max_depth") m.timing.max_depth = x;
        else if (k == "activation") m.timing.activation_cycle = x;
        else if (k == "late_offset") m.timing.late_offset = x;
        else if (k == "deactivation") m.timing.deactivation_cycle = x;
        else throw ModelError("unknown timing key '" + k + "'", st.line, 1);
      }
    } else if (kw == "signal") {
      need(2);
      for (std::size_t i = 1; i < w.size(); ++i) {
        declare(w[i], st.line);
        m.signals.push_back(w[i]);
      }
    } else if (kw == "machine") {
      need(2);
      declare(w[1], st.line);
      Machine mach;
      mach.name = w[1];
      mach.line = st.line;
      if (w.size() > 2) {
        if (w[2] != "states") throw ModelError("expected 'states'", st.line, 1);
        mach.states = 0;
        for (std::size_t i = 3; i < w.size(); ++i)
          mach.states |= static_cast<std::uint8_t>(1u << static_cast<int>(parse_state(w[i], st.line)));
        mach.states |= 1u;  // Init is always present
      }
      m.machines.push_back(std::move(mach));
    } else if (kw == "bus") {
      need(2);
      declare(w[1], st.line);
      m.buses.push_back(Bus{w[1]});
    } else if (kw == "link") {
      // link NAME SENDER -> RECEIVER on BUS
      need(7);
      if (w[3] != "->" || w[5] != "on") throw ModelError("expected 'link NAME A -> B on BUS'", st.line, 1);
      declare(w[1], st.line);
      links.push_back(PendingLink{w[1], w[2], w[4], w[6], st.line});
    } else if (kw == "power") {
      // power NAME circuit|module supplies M...
      need(5);
      declare(w[1], st.line);
      PowerKind k;
      if (w[2] == "circuit") k = PowerKind::Circuit;
      else if (w[2] == "module") k = PowerKind::Module;
      else throw ModelError("power kind must be circuit or module", st.line, 1);
      if (w[3] != "supplies") throw ModelError("expected 'supplies'", st.line, 1);
      powers.push_back(PendingPower{w[1], k, {w.begin() + 4, w.end()}, st.line});
    } else if (kw == "failure") {
      // failure NAME KIND TARGET [debounce=N]
      need(4);
      declare(w[1], st.line);
      int deb = -1;
      if (w.size() > 4) {
        auto [k, v] = key_value(w[4], st.line);
        if (k != "debounce") throw ModelError("unknown failure option '" + k + "'", st.line, 1);
        deb = to_int(v, st.line);
      }
      failures.push_back(PendingFailure{w[1], w[2], w[3], deb, st.line});
    } else if (kw == "transition") {
      transitions.push_back(split_rule(st));
    } else if (kw == "mode") {
      modes.push_back(split_rule(st));
    } else if (kw == "matrix") {
      need(2);
      m.matrix_path = w[1];
    } else {
      throw ModelError("unknown section '" + kw + "'", st.line, 1);
    }
  }

  auto machine = [&](const std::string& n, int line) {
    int i = m.machine_index(n);
    if (i < 0) throw ModelError("unknown identifier '" + n + "'", line, 1);
    return i;
  };

  std::set<std::pair<int, int>> pairs;
  for (const auto& pl : links) {
    Link l{pl.name, machine(pl.sender, pl.line), machine(pl.receiver, pl.line), m.bus_index(pl.bus)};
    if (l.bus < 0) throw ModelError("unknown identifier '" + pl.bus + "'", pl.line, 1);
    if (l.sender == l.receiver) throw ModelError("link '" + pl.name + "' loops on one machine", pl.line, 1);
    if (!pairs.insert({l.sender, l.receiver}).second)
      throw ModelError("duplicate declaration of link " + pl.sender + " -> " + pl.receiver, pl.line, 1);
    m.links.push_back(std::move(l));
  }
  for (const auto& pp : powers) {
    PowerSupply p{pp.name, pp.kind, {}};
    for (const auto& n : pp.machines) p.machines.push_back(machine(n, pp.line));
    m.power.push_back(std::move(p));
  }
  for (const auto& pf : failures) {
    Failure f;
    f.name = pf.name;
    if (pf.kind == "function" || pf.kind == "ecu") {
      f.kind = pf.kind == "function" ? FailureKind::Function : FailureKind::Ecu;
      f.target = machine(pf.target, pf.line);
    } else if (pf.kind == "link") {
      f.kind = FailureKind::Link;
      f.target = m.link_index(pf.target);
    } else if (pf.kind == "bus") {
      f.kind = FailureKind::Bus;
      f.target = m.bus_index(pf.target);
    } else if (pf.kind == "power") {
      f.target = m.power_index(pf.target);
      if (f.target >= 0)
        f.kind = m.power[f.target].kind == PowerKind::Circuit ? FailureKind::PowerCircuit
                                                              : FailureKind::PowerModule;
    } else {
      throw ModelError("unknown failure kind '" + pf.kind + "'", pf.line, 1);
    }
    if (f.target < 0) throw ModelError("unknown identifier '" + pf.target + "'", pf.line, 1);
    if (f.kind == FailureKind::Function) {
      if (pf.debounce > 0) throw ModelError("function failures are not debounced", pf.line, 1);
      f.debounce = 0;
    } else {
      f.debounce = pf.debounce >= 0 ? pf.debounce : m.timing.debounce;
    }
    m.failures.push_back(std::move(f));
  }
  m.timing.ftti_cycles();  // rejects a fractional FTTI early

  for (const auto& r : modes) {
    auto w = words(r.head);
    if (w.size() != 2) throw ModelError("expected 'mode NAME : predicate'", r.line, 1);
    declare(w[1], r.line);
    m.modes.push_back(ModeDef{w[1], Expr::constant(false)});
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    ParseContext ctx{&m, false, false, modes[i].body_line};
    m.modes[i].predicate = parse_expr(modes[i].body, ctx);
  }
  for (const auto& r : transitions) {
    // transition MACHINE SRC -> DST : guard
    auto w = words(r.head);
    if (w.size() != 5 || w[3] != "->")
      throw ModelError("expected 'transition M SRC -> DST : guard'", r.line, 1);
    int mi = machine(w[1], r.line);
    Transition t;
    t.source = parse_state(w[2], r.line);
    t.target = parse_state(w[4], r.line);
    t.line = r.line;
    ParseContext ctx{&m, false, false, r.body_line};
    t.guard = parse_expr(r.body, ctx);
    m.machines[mi].transitions.push_back(std::move(t));
  }
  m.finalize();
  return m;
}

SystemModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string print_model(const SystemModel& m) {
  std::ostringstream os;
  const TimingConfig& t = m.timing;
  os << "model " << m.name << "\n";
  os << "timing cycle_ms=" << t.cycle_ms << " ftti_ms=" << t.ftti_ms << " window=" << t.window
     << " debounce=" << t.debounce << " horizon=" << t.horizon << " max_depth=" << t.max_depth
     << " activation=" << t.activation_cycle << " late_offset=" << t.late_offset
     << " deactivation=" << t.deactivation_cycle << "\n";
  if (!m.signals.empty()) {
    os << "signal";
    for (const auto& s : m.signals) os << ' ' << s;
    os << "\n";
  }
  for (const auto& mach : m.machines) {
    os << "machine " << mach.name;
    if (mach.states != kAllStatesMask) {
      os << " states";
      for (int s = 0; s < 5; ++s)
        if (mach.states & (1u << s)) os << ' ' << to_string(static_cast<MachineState>(s));
    }
    os << "\n";
  }
  for (const auto& b : m.buses) os << "bus " << b.name << "\n";
  for (const auto& l : m.links)
    os << "link " << l.name << ' ' << m.machines[l.sender].name << " -> "
       << m.machines[l.receiver].name << " on " << m.buses[l.bus].name << "\n";
  for (const auto& p : m.power) {
    os << "power " << p.name << (p.kind == PowerKind::Circuit ? " circuit" : " module")
       << " supplies";
    for (int mi : p.machines) os << ' ' << m.machines[mi].name;
    os << "\n";
  }
  for (const auto& f : m.failures) {
    os << "failure " << f.name << ' ';
    switch (f.kind) {
      case FailureKind::Function: os << "function " << m.machines[f.target].name; break;
      case FailureKind::Ecu: os << "ecu " << m.machines[f.target].name; break;
      case FailureKind::Link: os << "link " << m.links[f.target].name; break;
      case FailureKind::Bus: os << "bus " << m.buses[f.target].name; break;
      case FailureKind::PowerCircuit:
      case FailureKind::PowerModule: os << "power " << m.power[f.target].name; break;
    }
    if (f.debounced()) os << " debounce=" << f.debounce;
    os << "\n";
  }
  for (const auto& md : m.modes) os << "mode " << md.name << " : " << print_expr(md.predicate, m) << "\n";
  for (const auto& mach : m.machines)
    for (const auto& tr : mach.transitions)
      os << "transition " << mach.name << ' ' << to_string(tr.source) << " -> "
         << to_string(tr.target) << " : " << print_expr(tr.guard, m) << "\n";
  if (!m.matrix_path.empty()) os << "matrix " << m.matrix_path << "\n";
  return os.str();
}

std::vector<std::string> failure_catalog(const SystemModel& m) {
  std::vector<std::string> out;
  out.reserve(m.failures.size());
  for (const auto& f : m.failures) out.push_back(f.name);
  return out;
}

// --------------------------------------------------------------------------
// Validation

namespace {

using Op = Expr::Op;

struct GuardAtoms {
  std::set<int> machines, failures, signals;
  bool temporal = false;
  bool modes = false;
};

void collect(const Expr& e, GuardAtoms& a) {
  switch (e.op) {
    case Op::StateIn: a.machines.insert(e.ref); break;
    case Op::FailureActive:
    case Op::Debounce: a.failures.insert(e.ref); break;
    case Op::Signal: a.signals.insert(e.ref); break;
    case Op::ModeFlag: a.modes = true; break;
    default: break;
  }
  if (e.is_temporal()) a.temporal = true;
  for (const auto& c : e.args) collect(c, a);
}

// Valuation used while searching for overlapping guards. A failure's
// position encodes 0 = inactive, k + 1 = active with debounce counter k.
struct Valuation {
  std::map<int, int> obs, fail, sig;
};

bool eval_valuation(const Expr& e, const Valuation& v) {
  switch (e.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::StateIn: return (e.mask >> v.obs.at(e.ref)) & 1u;
    case Op::FailureActive: return v.fail.at(e.ref) > 0;
    case Op::Debounce: {
      int s = v.fail.at(e.ref);
      return compare(e.cmp, s == 0 ? 0 : s - 1, e.value);
    }
    case Op::Signal: return v.sig.at(e.ref) != 0;
    case Op::Not: return !eval_valuation(e.args[0], v);
    case Op::And: return eval_valuation(e.args[0], v) && eval_valuation(e.args[1], v);
    case Op::Or: return eval_valuation(e.args[0], v) || eval_valuation(e.args[1], v);
    case Op::Implies: return !eval_valuation(e.args[0], v) || eval_valuation(e.args[1], v);
    case Op::Xor: return eval_valuation(e.args[0], v) != eval_valuation(e.args[1], v);
    default: return false;
  }
}

constexpr long kMaxValuations = 20'000'000;

// Returns a witness description when both guards can hold at once.
std::optional<std::string> overlap(const SystemModel& m, const Expr& a, const Expr& b, bool& skipped) {
  GuardAtoms atoms;
  collect(a, atoms);
  collect(b, atoms);
  std::vector<std::pair<int, int>> dims;  // (category, id) ; category 0 obs, 1 fail, 2 sig
  std::vector<int> sizes;
  long total = 1;
  for (int x : atoms.machines) dims.push_back({0, x}), sizes.push_back(kObservedValues);
  for (int x : atoms.failures)
    dims.push_back({1, x}), sizes.push_back(m.failures[x].debounce + 2);
  for (int x : atoms.signals) dims.push_back({2, x}), sizes.push_back(2);
  for (int s : sizes) total *= s;
  if (total > kMaxValuations) {
    skipped = true;
    return std::nullopt;
  }
  std::vector<int> idx(dims.size(), 0);
  Valuation v;
  for (long n = 0; n < total; ++n) {
    for (std::size_t d = 0; d < dims.size(); ++d) {
      auto [cat, id] = dims[d];
      (cat == 0 ? v.obs : cat == 1 ? v.fail : v.sig)[id] = idx[d];
    }
    if (eval_valuation(a, v) && eval_valuation(b, v)) {
      std::ostringstream os;
      bool first = true;
      for (std::size_t d = 0; d < dims.size(); ++d) {
        auto [cat, id] = dims[d];
        os << (first ? "" : ", ");
        first = false;
        if (cat == 0) os << m.machines[id].name << '=' << observed_name(static_cast<Observed>(idx[d]));
        else if (cat == 1) os << m.failures[id].name << (idx[d] ? "@" + std::to_string(idx[d] - 1) : "=off");
        else os << m.signals[id] << '=' << idx[d];
      }
      return first ? std::string("always") : os.str();
    }
    for (std::size_t d = 0; d < dims.size(); ++d) {
      if (++idx[d] < sizes[d]) break;
      idx[d] = 0;
    }
  }
  return std::nullopt;
}

}  // namespace

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

std::vector<Diagnostic> validate_model(const SystemModel& m) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string msg, int line) {
    out.push_back({Diagnostic::Severity::Error, std::move(msg), line});
  };
  auto warn = [&](std::string msg, int line) {
    out.push_back({Diagnostic::Severity::Warning, std::move(msg), line});
  };

  if (auto t = m.timing.check()) error("timing: " + *t, 0);
  for (const auto& f : m.failures)
    if (f.debounced() && f.debounce < 0) error("failure " + f.name + " has a negative debounce", 0);

  for (std::size_t mi = 0; mi < m.machines.size(); ++mi) {
    const Machine& mach = m.machines[mi];
    std::uint8_t targeted = 1u;  // Init
    for (std::size_t ti = 0; ti < mach.transitions.size(); ++ti) {
      const Transition& tr = mach.transitions[ti];
      auto declared = [&](MachineState s) { return (mach.states >> static_cast<int>(s)) & 1u; };
      if (!declared(tr.source) || !declared(tr.target))
        error(mach.name + ": transition uses an undeclared state", tr.line);
      targeted |= static_cast<std::uint8_t>(1u << static_cast<int>(tr.target));
      GuardAtoms atoms;
      collect(tr.guard, atoms);
      if (atoms.temporal || atoms.modes)
        error(mach.name + ": guards may not use temporal operators or mode flags", tr.line);
      for (int peer : atoms.machines) {
        if (peer == static_cast<int>(mi))
          error(mach.name + ": guard reads its own state through the bus", tr.line);
        else if (m.link_between(peer, static_cast<int>(mi)) < 0)
          error(mach.name + ": guard observes " + m.machines[peer].name +
                    " but no link " + m.machines[peer].name + " -> " + mach.name + " is declared",
                tr.line);
      }
    }
    for (std::size_t i = 0; i < mach.transitions.size(); ++i) {
      for (std::size_t j = i + 1; j < mach.transitions.size(); ++j) {
        const auto& a = mach.transitions[i];
        const auto& b = mach.transitions[j];
        if (a.source != b.source) continue;
        bool skipped = false;
        if (auto w = overlap(m, a.guard, b.guard, skipped))
          error(mach.name + ": nondeterministic transitions from " + std::string(to_string(a.source)) +
                    " (lines " + std::to_string(a.line) + " and " + std::to_string(b.line) +
                    ") both enabled when " + *w,
                b.line);
        if (skipped)
          warn(mach.name + ": determinism check skipped, too many valuations", b.line);
      }
    }
    for (int s = 1; s < 5; ++s)
      if ((mach.states >> s & 1u) && !(targeted >> s & 1u))
        warn(mach.name + ": state " + std::string(to_string(static_cast<MachineState>(s))) +
                 " is unreachable",
             mach.line);
  }

  for (const auto& md : m.modes) {
    GuardAtoms atoms;
    collect(md.predicate, atoms);
    if (atoms.temporal || atoms.modes) error("mode " + md.name + " must be a state predicate", 0);
    for (int x : atoms.machines)
      if (x < 0 || x >= static_cast<int>(m.machines.size()))
        error("mode " + md.name + " references an unknown machine", 0);
  }
  return out;
}

}  // namespace fov
