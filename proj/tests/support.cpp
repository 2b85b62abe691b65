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

#include "support.hpp"

#include <algorithm>
#include <sstream>

#ifndef FOV_DATA_DIR
#error "FOV_DATA_DIR must point at the data directory"
#endif

namespace fov::testing {

namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

const std::vector<std::string> kStateNames{"Init", "Ready", "Active", "Passive", "Failure"};

std::string state_set(std::mt19937& rng, bool with_nosignal) {
  std::vector<std::string> all = kStateNames;
  if (with_nosignal) all.push_back("NoSignal");
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(uniform(rng, 1, 3)));
  std::string s = "{";
  for (std::size_t i = 0; i < all.size(); ++i) s += (i ? ", " : "") + all[i];
  return s + "}";
}

std::string atom(const SystemModel& m, std::mt19937& rng) {
  switch (uniform(rng, 0, 5)) {
    case 0: return m.machines[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.machines.size()) - 1))].name +
                   " = " + pick(rng, kStateNames);
    case 1: return m.machines[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.machines.size()) - 1))].name +
                   " in " + state_set(rng, false);
    case 2: return m.modes[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.modes.size()) - 1))].name;
    case 3: return m.signals[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.signals.size()) - 1))];
    case 4: return m.failures[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.failures.size()) - 1))].name;
    default: {
      const auto& f = m.failures[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m.failures.size()) - 1))];
      return f.name + ".t_debounce " + (coin(rng) ? "<" : ">=") + " " + std::to_string(uniform(rng, 0, 3));
    }
  }
}

Formula parse(const std::string& text, const SystemModel& m) { return parse_formula(text, m); }

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string describe_trace(const SystemModel& m, const Trace& t) { return dump_trace_text(m, t); }

}  // namespace

std::string data_path(const std::string& rel) { return std::string(FOV_DATA_DIR) + "/" + rel; }

Bundle load_bundle(const std::string& model, const std::string& specs) {
  Bundle b;
  const std::string path = data_path(model);
  b.model = load_model(path);
  b.matrix = load_model_matrix(b.model, path);
  b.library = load_spec_library(data_path(specs));
  return b;
}

Bundle reference_bundle() { return load_bundle("reference.fom", "specs.fos"); }

std::vector<std::pair<std::string, Bundle>> toy_bundles() {
  std::vector<std::pair<std::string, Bundle>> out;
  for (const char* name : {"asym", "duplex", "chain"})
    out.emplace_back(name, load_bundle(std::string("toys/") + name + ".fom", "toys/toy.fos"));
  return out;
}

Trace random_lasso(const SystemModel& m, std::mt19937& rng, int max_len) {
  const int len = uniform(rng, 1, max_len);
  Trace t;
  for (int i = 0; i < len; ++i) {
    SystemState s;
    s.cycle = i;
    for (std::size_t k = 0; k < m.machines.size(); ++k)
      s.machines.push_back(static_cast<MachineState>(uniform(rng, 0, 4)));
    for (std::size_t k = 0; k < m.links.size(); ++k)
      s.delivered.push_back(static_cast<Observed>(uniform(rng, 0, kObservedValues - 1)));
    for (std::size_t k = 0; k < m.failures.size(); ++k) {
      s.active.push_back(coin(rng, 0.3));
      s.debounce.push_back(static_cast<std::uint8_t>(s.active.back() ? uniform(rng, 0, 3) : 0));
    }
    for (std::size_t k = 0; k < m.signals.size(); ++k) s.inputs.push_back(coin(rng));
    for (std::size_t k = 0; k < m.modes.size(); ++k) s.modes.push_back(coin(rng, 0.6));
    t.states.push_back(std::move(s));
  }
  SystemState last = t.states.back();
  ++last.cycle;
  t.states.push_back(last);
  t.loop = len - 1;
  return t;
}

std::string random_formula(const SystemModel& m, std::mt19937& rng, int depth) {
  if (depth <= 0 || coin(rng, 0.3)) return atom(m, rng);
  auto sub = [&] { return paren(random_formula(m, rng, depth - 1)); };
  switch (uniform(rng, 0, 10)) {
    case 0: return "!" + sub();
    case 1: return sub() + " & " + sub();
    case 2: return sub() + " | " + sub();
    case 3: return sub() + " -> " + sub();
    case 4: return "X " + sub();
    case 5: return "G " + sub();
    case 6: return "F " + sub();
    case 7: return sub() + " U " + sub();
    case 8: return "O " + sub();
    default: {
      const int a = uniform(rng, 0, 4), b = a + uniform(rng, 0, 5);
      return std::string(coin(rng) ? "G" : "F") + " [" + std::to_string(a) + "," + std::to_string(b) + "] " +
             sub();
    }
  }
}

std::string to_string(Law law) {
  switch (law) {
    case Law::GloballyDual: return "G p == !F !p";
    case Law::BoundedDual: return "G[a,b] p == !F[a,b] !p";
    case Law::LoopConsistency: return "G p iff p on [0,L]";
    case Law::BoundedWindow: return "G[a,b] p reads [i+a,i+b] only";
    case Law::OnceMonotone: return "O p monotone";
    case Law::NextGlobally: return "X G p == G X p";
    case Law::UntilFinally: return "F p == true U p";
    case Law::EarliestViolation: return "G p reports earliest violation";
  }
  return "?";
}

std::vector<Law> all_laws() {
  return {Law::GloballyDual, Law::BoundedDual,  Law::LoopConsistency, Law::BoundedWindow,
          Law::OnceMonotone, Law::NextGlobally, Law::UntilFinally,    Law::EarliestViolation};
}

LawRun check_law(Law law, const SystemModel& m, std::uint32_t seed, int traces) {
  std::mt19937 rng(seed);
  LawRun run;
  for (int n = 0; n < traces; ++n) {
    const Trace t = random_lasso(m, rng, 12);
    const std::string p = paren(random_formula(m, rng, 3));
    const int a = uniform(rng, 0, 6), b = a + uniform(rng, 0, 8);
    const std::string win = "[" + std::to_string(a) + "," + std::to_string(b) + "] ";
    const int last = *t.loop;
    bool ok = true;
    std::string what;
    switch (law) {
      case Law::GloballyDual:
        what = "G " + p;
        ok = evaluate_positions(parse("G " + p, m), m, t) == evaluate_positions(parse("!F !" + p, m), m, t);
        break;
      case Law::BoundedDual:
        what = "G " + win + p;
        ok = evaluate_positions(parse("G " + win + p, m), m, t) ==
             evaluate_positions(parse("!F " + win + "!" + p, m), m, t);
        break;
      case Law::LoopConsistency: {
        what = "G " + p;
        const auto at = evaluate_positions(parse(p, m), m, t);
        const bool all = std::all_of(at.begin(), at.end(), [](char c) { return c != 0; });
        ok = evaluate(parse("G " + p, m), m, t).holds == all;
        break;
      }
      case Law::BoundedWindow: {
        what = "G " + win + p;
        const auto at = evaluate_positions(parse(p, m), m, t);
        const auto g = evaluate_positions(parse("G " + win + p, m), m, t);
        for (int i = 0; i <= last && ok; ++i) {
          bool want = true;
          for (int j = i + a; j <= i + b; ++j) want = want && at[static_cast<std::size_t>(std::min(j, last))];
          ok = (g[static_cast<std::size_t>(i)] != 0) == want;
        }
        break;
      }
      case Law::OnceMonotone: {
        what = "O " + p;
        const auto o = evaluate_positions(parse("O " + p, m), m, t);
        for (int i = 1; i <= last && ok; ++i) ok = !o[static_cast<std::size_t>(i - 1)] || o[static_cast<std::size_t>(i)];
        break;
      }
      case Law::NextGlobally:
        what = "X G " + p;
        ok = evaluate_positions(parse("X G " + p, m), m, t) == evaluate_positions(parse("G X " + p, m), m, t);
        break;
      case Law::UntilFinally:
        what = "F " + p;
        ok = evaluate_positions(parse("F " + p, m), m, t) == evaluate_positions(parse("true U " + p, m), m, t);
        break;
      case Law::EarliestViolation: {
        what = "G " + p;
        const auto at = evaluate_positions(parse(p, m), m, t);
        const auto first = std::find(at.begin(), at.end(), 0);
        const Verdict v = evaluate(parse("G " + p, m), m, t);
        if (first == at.end()) {
          ok = v.holds;
        } else {
          ok = !v.holds && v.violation && *v.violation == static_cast<int>(first - at.begin());
        }
        break;
      }
    }
    ++run.traces;
    if (!ok) {
      if (run.failures == 0) run.first_counterexample = what + "\n" + describe_trace(m, t);
      ++run.failures;
    }
  }
  return run;
}

std::string random_model_text(std::mt19937& rng) {
  const int n = uniform(rng, 2, 4);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("M" + std::to_string(i));
  const int debounce = uniform(rng, 1, 4);
  const int horizon = uniform(rng, 2, 6);
  std::ostringstream os;
  os << "model random\n";
  // max_depth covers the last onset plus FTTI window and debounce with room
  // for the machines to settle afterwards.
  os << "timing cycle_ms=10 ftti_ms=50 window=2 debounce=" << debounce << " horizon=" << horizon
     << " max_depth=64 activation=1 late_offset=4 deactivation=16\n";
  os << "signal Activation Deactivation\n";
  for (const auto& nm : names) os << "machine " << nm << " states Ready Active Passive Failure\n";
  const int buses = uniform(rng, 1, 2);
  for (int b = 0; b < buses; ++b) os << "bus B" << b << "\n";

  struct L {
    int s, r;
  };
  std::vector<L> links;
  for (int s = 0; s < n; ++s)
    for (int r = 0; r < n; ++r)
      if (s != r && coin(rng, 0.6)) links.push_back({s, r});
  if (links.empty()) links.push_back({0, 1});
  for (const auto& l : links)
    os << "link L" << l.s << "_" << l.r << " " << names[static_cast<std::size_t>(l.s)] << " -> "
       << names[static_cast<std::size_t>(l.r)] << " on B" << uniform(rng, 0, buses - 1) << "\n";

  os << "power P0 circuit supplies " << names[0];
  for (int i = 1; i < n; ++i)
    if (coin(rng)) os << " " << names[static_cast<std::size_t>(i)];
  os << "\n";
  os << "power P1 module supplies " << names[static_cast<std::size_t>(n - 1)] << "\n";

  auto dbn = [&]() -> std::string {
    return coin(rng, 0.5) ? " debounce=" + std::to_string(uniform(rng, 1, 4)) : "";
  };
  for (const auto& nm : names) os << "failure Function" << nm << " function " << nm << "\n";
  for (const auto& nm : names) os << "failure Ecu" << nm << " ecu " << nm << dbn() << "\n";
  for (const auto& l : links) os << "failure LinkL" << l.s << "_" << l.r << " link L" << l.s << "_" << l.r << dbn() << "\n";
  for (int b = 0; b < buses; ++b) os << "failure BusB" << b << " bus B" << b << dbn() << "\n";
  os << "failure PowerP0 power P0" << dbn() << "\n";
  os << "failure PowerP1 power P1" << dbn() << "\n";

  os << "mode Up : " << names[0] << " = Active\n";
  os << "mode Down : " << names[0] << " != Active\n";

  // Guards read observed senders of the machine's incoming links.
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> senders;
    for (const auto& l : links)
      if (l.r == i) senders.push_back(names[static_cast<std::size_t>(l.s)]);
    auto literal = [&]() -> std::string {
      if (senders.empty() || coin(rng, 0.2)) return "Activation";
      const std::string& s = pick(rng, senders);
      return coin(rng) ? s + " in " + state_set(rng, true) : s + " = " + pick(rng, kStateNames);
    };
    auto guard = [&]() -> std::string {
      std::string g = literal();
      for (int k = uniform(rng, 0, 2); k > 0; --k) g = paren(g) + (coin(rng) ? " & " : " | ") + paren(literal());
      return coin(rng, 0.2) ? "!" + paren(g) : g;
    };
    const std::string& nm = names[static_cast<std::size_t>(i)];
    const std::string ff = "Function" + nm;
    os << "transition " << nm << " Init -> Ready : true\n";
    os << "transition " << nm << " Ready -> Active : !" << ff << " & (" << guard() << ")\n";
    os << "transition " << nm << " Ready -> Failure : " << ff << "\n";
    os << "transition " << nm << " Active -> Passive : " << ff << " | (" << guard() << ")\n";
    os << "transition " << nm << " Passive -> Ready : !" << ff << " & (" << guard() << ")\n";
  }
  return os.str();
}

std::string debounce_property(const SystemModel& m, const std::vector<Phasing>& phasings) {
  VerifyConfig cfg = VerifyConfig::from(m.timing);
  for (std::size_t f = 0; f < m.failures.size(); ++f) {
    const Failure& fl = m.failures[f];
    if (!fl.debounced()) continue;
    FailureCase c{1, static_cast<int>(f), std::nullopt};
    for (Phasing ph : phasings) {
      cfg.phasings = {ph};
      FailureScenario clean = make_scenario(m, c, ScenarioRef{ph, 0, std::nullopt}, m.timing);
      clean.onsets.clear();
      const Trace base = simulate(m, clean, m.timing.max_depth + fl.debounce + 8);
      for (const ScenarioRef& ref : enumerate_scenarios(c, cfg)) {
        const FailureScenario sc = make_scenario(m, c, ref, m.timing);
        const int onset = sc.onsets.at(0).cycle;
        const int expiry = onset + fl.debounce;
        const Trace t = simulate(m, sc, expiry + 2);
        auto where = [&](const std::string& what, int cycle) {
          return fl.name + " " + ref.to_string() + ": " + what + " at cycle " + std::to_string(cycle) +
                 " (onset " + std::to_string(onset) + ", expiry " + std::to_string(expiry) + ")";
        };
        auto at = [](const Trace& tr, int k) -> const SystemState& {
          return tr.states[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(tr.states.size()) - 1))];
        };
        for (int k = 0; k < expiry; ++k) {
          if (at(t, k).machines != at(base, k).machines) return where("machine reacted", k);
          if (at(t, k).delivered != at(base, k).delivered) return where("link changed", k);
        }
        // The failure must actually bite at expiry.
        for (std::size_t l = 0; l < m.links.size(); ++l) {
          const auto& tr = m.link_triggers(static_cast<int>(l));
          if (std::find(tr.begin(), tr.end(), static_cast<int>(f)) != tr.end() &&
              at(t, expiry).delivered[l] != kNoSignal)
            return where("link " + m.links[l].name + " still delivers", expiry);
        }
      }
    }
  }
  return {};
}

namespace {

void compare_one(const SystemModel& m, const CaseSpecs& cs, const VerifyConfig& cfg, OracleRun& run) {
  const CaseResult a = verify_case(m, cs, cfg);
  const CaseResult b = oracle_verify(m, cs, cfg);
  ++run.cases;
  std::string why;
  if (a.verdict != b.verdict) {
    why = std::string("verdict ") + std::string(to_string(a.verdict)) + " vs " + std::string(to_string(b.verdict));
  } else if (a.verdict != VerdictKind::Pass) {
    if (a.scenario != b.scenario)
      why = "scenario " + (a.scenario ? a.scenario->to_string() : "-") + " vs " +
            (b.scenario ? b.scenario->to_string() : "-");
    else if (a.verdict == VerdictKind::Violation && (a.spec != b.spec || a.position != b.position))
      why = "spec " + a.spec + "@" + std::to_string(a.position) + " vs " + b.spec + "@" + std::to_string(b.position);
  }
  if (why.empty()) {
    ++run.agree;
    if (a.verdict == VerdictKind::Violation) ++run.violations;
  } else {
    run.mismatches.push_back(a.id + ": " + why);
  }
}

}  // namespace

OracleRun compare_with_oracle(const SystemModel& m, const std::vector<CaseSpecs>& prepared,
                              const VerifyConfig& cfg) {
  OracleRun run;
  for (const auto& cs : prepared) compare_one(m, cs, cfg, run);
  return run;
}

OracleRun compare_with_oracle(const SystemModel& m, const FailureMatrix& fm,
                              const std::vector<SpecTemplate>& library,
                              const std::vector<FailureCase>& cases, const VerifyConfig& cfg) {
  std::vector<CaseSpecs> prepared;
  for (const auto& c : cases) prepared.push_back(prepare_case(m, fm, library, c));
  return compare_with_oracle(m, prepared, cfg);
}

std::vector<Mutant> seeded_mutants(const Bundle& b, std::uint32_t seed, int count) {
  std::mt19937 rng(seed);
  const SystemModel& m = b.model;
  std::vector<Mutant> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts++ < count * 50) {
    Mutation mu;
    Mutant x{"", m, b.matrix, ""};
    try {
      switch (uniform(rng, 0, 3)) {
        case 0: {
          mu.kind = MutationKind::DropTransition;
          const auto& mc = pick(rng, m.machines);
          mu.machine = mc.name;
          mu.index = uniform(rng, 0, static_cast<int>(mc.transitions.size()) - 1);
          x.model = inject_model_mutation(m, mu);
          break;
        }
        case 1: {
          mu.kind = MutationKind::FlipGuardLiteral;
          const auto& mc = pick(rng, m.machines);
          mu.machine = mc.name;
          mu.index = uniform(rng, 0, static_cast<int>(mc.transitions.size()) - 1);
          mu.literal = uniform(rng, 0, 3);
          x.model = inject_model_mutation(m, mu);
          break;
        }
        case 2: {
          mu.kind = MutationKind::CorruptMatrixCell;
          const auto& fs = b.matrix.failures();
          const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(fs.size()) - 1));
          const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(fs.size()) - 1));
          std::vector<std::string> others;
          for (const auto& md : m.modes)
            if (md.name != b.matrix.at(i, j)) others.push_back(md.name);
          mu.primary = fs[i];
          if (i != j) mu.secondary = fs[j];
          mu.mode = pick(rng, others);
          x.matrix = inject_matrix_mutation(b.matrix, mu);
          break;
        }
        default: {
          std::vector<std::string> shaped;
          for (const auto& t : b.library)
            if (t.scope != SpecScope::Always) shaped.push_back(t.name);
          mu.kind = MutationKind::NegateTarget;
          mu.spec = pick(rng, shaped);
          x.negated_spec = mu.spec;
          break;
        }
      }
    } catch (const MutationError&) {
      continue;
    }
    x.description = mu.description(m);
    out.push_back(std::move(x));
  }
  return out;
}

OracleRun compare_mutant(const Bundle& b, const Mutant& mu, const VerifyConfig& cfg) {
  std::vector<CaseSpecs> prepared;
  for (const auto& c : enumerate_cases(mu.model, 2)) {
    CaseSpecs cs = prepare_case(mu.model, mu.matrix, b.library, c);
    if (!mu.negated_spec.empty()) {
      for (auto* list : {&cs.specs, &cs.swapped_specs})
        for (auto& s : *list)
          if (s.name == mu.negated_spec) s.formula = mutate_specification(s.formula, MutationKind::NegateTarget);
    }
    prepared.push_back(std::move(cs));
  }
  return compare_with_oracle(mu.model, prepared, cfg);
}

int replay_violations(const SystemModel& m, const FailureMatrix& fm,
                      const std::vector<SpecTemplate>& library, const SweepReport& r,
                      const VerifyConfig& cfg, std::vector<std::string>& mismatches) {
  int checked = 0;
  for (const auto& res : r.results) {
    if (res.verdict != VerdictKind::Violation) continue;
    ++checked;
    if (!res.scenario || !res.trace) {
      mismatches.push_back(res.id + ": violation without scenario or trace");
      continue;
    }
    const FailureScenario sc = make_scenario(m, res.c, *res.scenario, cfg.timing);
    const Trace t = simulate(m, sc, cfg.timing.max_depth);
    if (dump_trace_json(m, t) != dump_trace_json(m, *res.trace)) {
      mismatches.push_back(res.id + ": replayed trace differs for " + res.scenario->to_string());
      continue;
    }
    const CaseSpecs cs = prepare_case(m, fm, library, res.c);
    const auto spec = std::find_if(cs.specs.begin(), cs.specs.end(),
                                   [&](const InstantiatedSpec& s) { return s.name == res.spec; });
    if (spec == cs.specs.end()) {
      mismatches.push_back(res.id + ": violated spec " + res.spec + " not instantiated");
      continue;
    }
    const Verdict v = evaluate(spec->formula, m, t);
    if (v.holds || *v.violation != res.position)
      mismatches.push_back(res.id + ": replayed position differs for " + res.spec);
  }
  return checked;
}

}  // namespace fov::testing
