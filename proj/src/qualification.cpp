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

#include "fov/qualification.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fov/executor.hpp"
#include "json.hpp"

namespace fov {

namespace {

constexpr std::pair<MutationKind, std::string_view> kKindNames[] = {
    {MutationKind::NegateTarget, "negate-target"},
    {MutationKind::NegateBoth, "negate-both"},
    {MutationKind::DropTransition, "drop-transition"},
    {MutationKind::FlipGuardLiteral, "flip-literal"},
    {MutationKind::CorruptMatrixCell, "corrupt-cell"},
    {MutationKind::DisableDebounce, "disable-debounce"},
};

bool is_spec_mutation(MutationKind k) {
  return k == MutationKind::NegateTarget || k == MutationKind::NegateBoth;
}

}  // namespace

std::string_view to_string(MutationKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

MutationKind parse_mutation_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  throw std::invalid_argument("unknown mutation kind '" + std::string(s) + "'");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Violation: return "violation";
    case Outcome::EngineError: return "engine-error";
  }
  return "?";
}

std::string Mutation::description(const SystemModel& m) const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case MutationKind::NegateTarget:
    case MutationKind::NegateBoth:
      os << " " << spec;
      break;
    case MutationKind::DropTransition:
    case MutationKind::FlipGuardLiteral: {
      os << " " << machine << "#" << index;
      int mi = m.machine_index(machine);
      if (mi >= 0 && index >= 0 && index < static_cast<int>(m.machines[mi].transitions.size())) {
        const auto& t = m.machines[mi].transitions[index];
        os << " (" << fov::to_string(t.source) << "->" << fov::to_string(t.target) << ")";
      }
      if (kind == MutationKind::FlipGuardLiteral) os << " literal " << literal;
      break;
    }
    case MutationKind::CorruptMatrixCell:
      os << " (" << primary << ", " << (secondary.empty() ? primary : secondary) << ") := " << mode;
      break;
    case MutationKind::DisableDebounce:
      os << " " << failure;
      break;
  }
  return os.str();
}

std::pair<Formula, Formula> split_implication(const Formula& f) {
  if (f.op != Expr::Op::Globally || f.args.size() != 1 || f.args[0].op != Expr::Op::Implies)
    throw SpecShapeError("formula is not of the form G (condition -> target)");
  return {f.args[0].args[0], f.args[0].args[1]};
}

Formula mutate_specification(const Formula& f, MutationKind kind) {
  auto [c, t] = split_implication(f);
  using Op = Expr::Op;
  switch (kind) {
    case MutationKind::NegateTarget:
      return Expr::unary(Op::Globally, Expr::binary(Op::Implies, c, Expr::unary(Op::Not, t)));
    case MutationKind::NegateBoth:
      return Expr::binary(Op::Implies, Expr::unary(Op::Globally, Expr::unary(Op::Not, c)),
                          Expr::unary(Op::Globally, Expr::unary(Op::Not, t)));
    default:
      throw std::invalid_argument("not a specification mutation: " + std::string(to_string(kind)));
  }
}

namespace {

Transition& transition_at(SystemModel& m, const Mutation& mu) {
  int mi = m.machine_index(mu.machine);
  if (mi < 0) throw MutationError("unknown machine '" + mu.machine + "'");
  auto& ts = m.machines[mi].transitions;
  if (mu.index < 0 || mu.index >= static_cast<int>(ts.size()))
    throw MutationError("machine " + mu.machine + " has no transition #" + std::to_string(mu.index));
  return ts[mu.index];
}

// Negates the k-th atom in preorder; returns false when there are fewer.
bool flip_atom(Expr& e, int& k) {
  if (e.is_atom()) {
    if (k-- == 0) {
      e = Expr::unary(Expr::Op::Not, e);
      return true;
    }
    return false;
  }
  for (auto& a : e.args)
    if (flip_atom(a, k)) return true;
  return false;
}

}  // namespace

SystemModel inject_model_mutation(const SystemModel& m, const Mutation& mu) {
  SystemModel out = m;
  switch (mu.kind) {
    case MutationKind::DropTransition: {
      Transition& t = transition_at(out, mu);
      auto& ts = out.machines[out.machine_index(mu.machine)].transitions;
      ts.erase(ts.begin() + (&t - ts.data()));
      break;
    }
    case MutationKind::FlipGuardLiteral: {
      Transition& t = transition_at(out, mu);
      int k = mu.literal;
      if (k < 0 || !flip_atom(t.guard, k))
        throw MutationError(mu.machine + "#" + std::to_string(mu.index) + " has no literal " +
                            std::to_string(mu.literal));
      break;
    }
    case MutationKind::DisableDebounce: {
      int f = out.failure_index(mu.failure);
      if (f < 0) throw MutationError("unknown failure '" + mu.failure + "'");
      if (!out.failures[f].debounced()) throw MutationError("failure '" + mu.failure + "' is not debounced");
      out.failures[f].debounce = 0;
      break;
    }
    case MutationKind::CorruptMatrixCell:
      break;  // the model is untouched
    default:
      throw std::invalid_argument("not a model mutation: " + std::string(to_string(mu.kind)));
  }
  out.finalize();
  return out;
}

FailureMatrix inject_matrix_mutation(const FailureMatrix& fm, const Mutation& mu) {
  if (mu.kind != MutationKind::CorruptMatrixCell) return fm;
  const auto& names = fm.failures();
  auto idx = [&](const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw MutationError("failure '" + n + "' is not in the matrix");
    return static_cast<std::size_t>(it - names.begin());
  };
  const std::size_t r = idx(mu.primary), c = idx(mu.secondary.empty() ? mu.primary : mu.secondary);
  if (fm.at(r, c) == mu.mode)
    throw MutationError("cell " + mu.primary + "/" + (mu.secondary.empty() ? mu.primary : mu.secondary) +
                        " already holds " + mu.mode);
  FailureMatrix out = fm;
  out.set(r, c, mu.mode);
  return out;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

Outcome parse_outcome(const std::string& s, const std::string& where) {
  if (s == "pass") return Outcome::Pass;
  if (s == "violation") return Outcome::Violation;
  throw std::invalid_argument(where + "expect must be pass or violation, not '" + s + "'");
}

int to_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(where + "'" + s + "' is not an integer");
}

}  // namespace

std::vector<SuiteEntry> parse_suite(std::string_view text) {
  std::vector<SuiteEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string kind;
    if (!(words >> kind)) continue;
    const std::string where = "suite line " + std::to_string(line_no) + ": ";
    SuiteEntry e;
    e.line = line_no;
    try {
      e.mutation.kind = parse_mutation_kind(kind);
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument(where + ex.what());
    }
    e.expect = e.mutation.kind == MutationKind::NegateBoth ? Outcome::Pass : Outcome::Violation;
    std::map<std::string, std::string> kv;
    for (std::string w; words >> w;) {
      auto eq = w.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument(where + "expected key=value, got '" + w + "'");
      if (!kv.emplace(w.substr(0, eq), w.substr(eq + 1)).second)
        throw std::invalid_argument(where + "duplicate key '" + w.substr(0, eq) + "'");
    }
    auto take = [&](const char* key, bool required) -> std::optional<std::string> {
      auto it = kv.find(key);
      if (it == kv.end()) {
        if (required) throw std::invalid_argument(where + kind + " needs " + key + "=");
        return std::nullopt;
      }
      std::string v = it->second;
      kv.erase(it);
      return v;
    };
    Mutation& mu = e.mutation;
    switch (mu.kind) {
      case MutationKind::NegateTarget:
      case MutationKind::NegateBoth:
        mu.spec = *take("spec", true);
        break;
      case MutationKind::FlipGuardLiteral:
        mu.literal = to_int(*take("literal", true), where);
        [[fallthrough]];
      case MutationKind::DropTransition:
        mu.machine = *take("machine", true);
        mu.index = to_int(*take("index", true), where);
        break;
      case MutationKind::CorruptMatrixCell:
        mu.primary = *take("primary", true);
        mu.secondary = take("secondary", false).value_or("");
        mu.mode = *take("mode", true);
        break;
      case MutationKind::DisableDebounce:
        mu.failure = *take("failure", true);
        break;
    }
    if (auto c = take("case", false)) e.cases = split(*c, ',');
    if (auto p = take("phasing", false)) {
      try {
        e.phasing = parse_phasing(*p);
      } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument(where + ex.what());
      }
    }
    if (auto x = take("expect", false)) e.expect = parse_outcome(*x, where);
    if (!kv.empty()) throw std::invalid_argument(where + "unknown key '" + kv.begin()->first + "'");
    const bool needs_case = mu.kind != MutationKind::CorruptMatrixCell && mu.kind != MutationKind::DisableDebounce;
    if (needs_case && e.cases.empty()) throw std::invalid_argument(where + kind + " needs case=");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<SuiteEntry> load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read suite file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

std::string QualificationReport::status() const {
  if (!baseline_ok) return "baseline-failed";
  return pass() ? "pass" : "fail";
}

bool QualificationReport::pass() const {
  return baseline_ok && std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.ok(); });
}

namespace {

bool reads_signal(const Expr& e, int signal) {
  if (e.op == Expr::Op::Signal && e.ref == signal) return true;
  return std::any_of(e.args.begin(), e.args.end(), [&](const Expr& a) { return reads_signal(a, signal); });
}

Phasing phasing_for(const SystemModel& m, const Formula& condition) {
  int d = m.signal_index("Deactivation");
  return d >= 0 && reads_signal(condition, d) ? Phasing::Deact : Phasing::Late;
}

const InstantiatedSpec* find_spec(const CaseSpecs& cs, const std::string& name) {
  for (const auto& s : cs.specs)
    if (s.name == name) return &s;
  return nullptr;
}

Outcome outcome_of(VerdictKind k) {
  switch (k) {
    case VerdictKind::Pass: return Outcome::Pass;
    case VerdictKind::Violation: return Outcome::Violation;
    case VerdictKind::EngineError: return Outcome::EngineError;
  }
  return Outcome::EngineError;
}

std::string describe(const CaseResult& r) {
  std::string s = r.id;
  if (r.verdict == VerdictKind::Violation) s += ": " + r.spec + " at " + std::to_string(r.position);
  if (r.verdict == VerdictKind::EngineError) s += ": " + r.error;
  if (r.scenario) s += " (" + r.scenario->to_string() + ")";
  return s;
}

// Folds case results: any violation wins, then any engine error.
void fold(QualificationEntry& e, const std::vector<CaseResult>& results) {
  e.observed = Outcome::Pass;
  for (const auto& r : results) {
    Outcome o = outcome_of(r.verdict);
    if (o == Outcome::Violation && e.observed != Outcome::Violation) {
      e.observed = o;
      e.detail = describe(r);
    } else if (o == Outcome::EngineError && e.observed == Outcome::Pass) {
      e.observed = o;
      e.detail = describe(r);
    }
  }
  if (e.observed == Outcome::Pass) e.detail = std::to_string(results.size()) + " case(s) pass";
}

// One spec of one case, optionally mutated, under the given phasings.
CaseResult check_spec(const SystemModel& m, const FailureMatrix& fm, const std::vector<SpecTemplate>& library,
                      const FailureCase& c, const std::string& spec, std::optional<MutationKind> kind,
                      const VerifyConfig& cfg) {
  CaseSpecs cs = prepare_case(m, fm, library, c);
  const InstantiatedSpec* s = find_spec(cs, spec);
  if (!s) throw MutationError("spec '" + spec + "' does not apply to case " + c.id(m));
  InstantiatedSpec one = *s;
  if (kind) one.formula = mutate_specification(one.formula, *kind);
  cs.specs = {std::move(one)};
  cs.swapped_target = cs.target;
  cs.swapped_specs.clear();
  return verify_case(m, cs, cfg);
}

std::vector<FailureCase> entry_cases(const SystemModel& m, const SuiteEntry& e) {
  std::vector<FailureCase> out;
  for (const auto& id : e.cases) out.push_back(parse_case_id(id, m));
  if (!out.empty()) return out;
  const Mutation& mu = e.mutation;
  if (mu.kind == MutationKind::CorruptMatrixCell)
    out.push_back(parse_case_id(mu.secondary.empty() ? mu.primary : mu.primary + "+" + mu.secondary, m));
  if (mu.kind == MutationKind::DisableDebounce) out.push_back(parse_case_id(mu.failure, m));
  return out;
}

QualificationEntry run_entry(const SystemModel& m, const FailureMatrix& fm,
                             const std::vector<SpecTemplate>& library, const SuiteEntry& e,
                             const VerifyConfig& base, int workers) {
  QualificationEntry q;
  q.description = e.mutation.description(m);
  q.expected = e.expect;
  try {
    const auto cases = entry_cases(m, e);
    if (is_spec_mutation(e.mutation.kind)) {
      std::vector<CaseResult> results;
      for (const auto& c : cases) {
        VerifyConfig cfg = base;
        if (e.phasing) {
          cfg.phasings = {*e.phasing};
        } else {
          CaseSpecs cs = prepare_case(m, fm, library, c);
          const InstantiatedSpec* s = find_spec(cs, e.mutation.spec);
          if (!s) throw MutationError("spec '" + e.mutation.spec + "' does not apply to case " + c.id(m));
          cfg.phasings = {phasing_for(m, split_implication(s->formula).first)};
        }
        results.push_back(check_spec(m, fm, library, c, e.mutation.spec, e.mutation.kind, cfg));
      }
      fold(q, results);
    } else {
      SystemModel mm = inject_model_mutation(m, e.mutation);
      FailureMatrix mf = inject_matrix_mutation(fm, e.mutation);
      for (const auto& d : validate_model(mm))
        q.model_diagnostics.push_back((d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ") +
                                      d.message);
      VerifyConfig cfg = base;
      if (e.phasing) cfg.phasings = {*e.phasing};
      fold(q, verify_sweep(mm, mf, library, cases, cfg, workers).results);
    }
  } catch (const std::exception& ex) {
    q.observed = Outcome::EngineError;
    q.detail = ex.what();
  }
  return q;
}

}  // namespace

QualificationReport run_qualification(const SystemModel& m, const FailureMatrix& fm,
                                      const std::vector<SpecTemplate>& library,
                                      const std::vector<SuiteEntry>& suite, const VerifyConfig& cfg,
                                      int workers) {
  if (suite.empty()) throw std::invalid_argument("empty mutation suite");
  std::set<MutationKind> kinds;
  for (const auto& e : suite) kinds.insert(e.mutation.kind);
  for (const auto& [kind, name] : kKindNames)
    if (!kinds.count(kind)) throw std::invalid_argument("suite has no " + std::string(name) + " mutation");

  QualificationReport rep;
  std::vector<FailureCase> baseline = enumerate_cases(m, 1);
  for (const auto& e : suite) {
    std::vector<FailureCase> cs;
    try {
      cs = entry_cases(m, e);
    } catch (const std::exception&) {
      continue;  // reported by the entry itself
    }
    for (const auto& c : cs)
      if (std::find(baseline.begin(), baseline.end(), c) == baseline.end()) baseline.push_back(c);
  }
  SweepReport base = verify_sweep(m, fm, library, baseline, cfg, workers);
  if (!base.all_pass()) {
    rep.baseline_ok = false;
    for (const auto& r : base.results)
      if (r.verdict != VerdictKind::Pass) {
        rep.baseline_detail = describe(r);
        break;
      }
    return rep;
  }
  rep.baseline_detail = std::to_string(baseline.size()) + " case(s) pass";
  for (const auto& e : suite) rep.entries.push_back(run_entry(m, fm, library, e, cfg, workers));
  return rep;
}

std::optional<Representative> pick_representative(const SystemModel& m, const FailureMatrix& fm,
                                                  const std::vector<SpecTemplate>& library,
                                                  const SpecTemplate& t, const VerifyConfig& cfg) {
  for (const auto& c : enumerate_cases(m, 2)) {
    CaseSpecs cs = prepare_case(m, fm, library, c);
    const InstantiatedSpec* s = find_spec(cs, t.name);
    if (!s) continue;
    const Formula condition = split_implication(s->formula).first;
    VerifyConfig one = cfg;
    one.phasings = {phasing_for(m, condition)};
    bool everywhere = true;
    for (const auto& ref : enumerate_scenarios(c, one)) {
      Trace tr = simulate(m, make_scenario(m, c, ref, one.timing), one.timing.max_depth);
      if (!tr.loop) {
        everywhere = false;
        break;
      }
      auto pos = evaluate_positions(condition, m, tr);
      if (std::none_of(pos.begin(), pos.end(), [](char v) { return v != 0; })) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) return Representative{t.name, c, one.phasings.front()};
  }
  return std::nullopt;
}

QualificationReport run_spec_validation(const SystemModel& m, const FailureMatrix& fm,
                                        const std::vector<SpecTemplate>& library,
                                        const VerifyConfig& cfg, int /*workers*/) {
  QualificationReport rep;
  for (const auto& t : library) {
    std::optional<Representative> rp;
    std::string error;
    try {
      rp = pick_representative(m, fm, library, t, cfg);
      if (!rp) error = "no case reaches the condition of '" + t.name + "' in every scenario";
    } catch (const std::exception& ex) {
      error = t.name + ": " + ex.what();
    }
    const std::pair<std::optional<MutationKind>, Outcome> columns[] = {
        {std::nullopt, Outcome::Pass},
        {MutationKind::NegateTarget, Outcome::Violation},
        {MutationKind::NegateBoth, Outcome::Pass},
    };
    for (const auto& [kind, expected] : columns) {
      QualificationEntry q;
      q.description = (kind ? std::string(to_string(*kind)) : std::string("baseline")) + " " + t.name;
      q.expected = expected;
      if (!rp) {
        q.observed = Outcome::EngineError;
        q.detail = error;
      } else {
        q.description += " on " + rp->c.id(m) + " (" + std::string(to_string(rp->phasing)) + ")";
        try {
          VerifyConfig one = cfg;
          one.phasings = {rp->phasing};
          fold(q, {check_spec(m, fm, library, rp->c, t.name, kind, one)});
        } catch (const std::exception& ex) {
          q.observed = Outcome::EngineError;
          q.detail = ex.what();
        }
      }
      rep.entries.push_back(std::move(q));
    }
  }
  rep.baseline_detail = "per-template baseline columns";
  return rep;
}

std::string qualification_json(const QualificationReport& r) {
  nlohmann::ordered_json j;
  j["status"] = r.status();
  j["baseline"] = {{"pass", r.baseline_ok}, {"detail", r.baseline_detail}};
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json x;
    x["mutation"] = e.description;
    x["expected"] = std::string(to_string(e.expected));
    x["observed"] = std::string(to_string(e.observed));
    x["ok"] = e.ok();
    x["detail"] = e.detail;
    if (!e.model_diagnostics.empty()) x["model_diagnostics"] = e.model_diagnostics;
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  j["detected"] = std::count_if(r.entries.begin(), r.entries.end(), [](const auto& e) { return e.ok(); });
  j["total"] = r.entries.size();
  return j.dump(2) + "\n";
}

std::string qualification_summary(const QualificationReport& r) {
  std::ostringstream os;
  os << "baseline: " << (r.baseline_ok ? "pass" : "FAIL") << " (" << r.baseline_detail << ")\n";
  std::size_t ok = 0;
  for (const auto& e : r.entries) {
    ok += e.ok();
    os << (e.ok() ? "  ok    " : "  MISS  ") << e.description << ": expected " << to_string(e.expected)
       << ", observed " << to_string(e.observed);
    if (!e.ok() || e.observed == Outcome::Violation) os << " [" << e.detail << "]";
    os << "\n";
  }
  os << ok << "/" << r.entries.size() << " as expected; status " << r.status() << "\n";
  return os.str();
}

}  // namespace fov
