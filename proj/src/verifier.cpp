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

#include "fov/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace fov {

std::string_view to_string(Phasing p) {
  switch (p) {
    case Phasing::Early: return "early";
    case Phasing::Late: return "late";
    case Phasing::Deact: return "deact";
  }
  return "?";
}

Phasing parse_phasing(std::string_view s) {
  if (s == "early") return Phasing::Early;
  if (s == "late") return Phasing::Late;
  if (s == "deact") return Phasing::Deact;
  throw std::invalid_argument("unknown phasing '" + std::string(s) + "'");
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Pass: return "pass";
    case VerdictKind::Violation: return "violation";
    case VerdictKind::EngineError: return "engine-error";
  }
  return "?";
}

void VerifyConfig::check() const {
  if (auto problem = timing.check()) throw ConfigError(*problem);
  if (phasings.empty()) throw ConfigError("no phasing selected");
}

std::string ScenarioRef::to_string() const {
  std::string s = std::string(fov::to_string(phasing)) + " t1=" + std::to_string(t1);
  if (t2) s += " t2=" + std::to_string(*t2);
  return s;
}

std::vector<ScenarioRef> enumerate_scenarios(const FailureCase& c, const VerifyConfig& cfg) {
  std::vector<ScenarioRef> out;
  const int h = cfg.timing.horizon;
  for (Phasing p : cfg.phasings)
    for (int t1 = 0; t1 <= h; ++t1) {
      if (!c.secondary) {
        out.push_back(ScenarioRef{p, t1, std::nullopt});
        continue;
      }
      for (int t2 = t1; t2 <= h; ++t2) out.push_back(ScenarioRef{p, t1, t2});
    }
  return out;
}

FailureScenario make_scenario(const SystemModel& m, const FailureCase& c, const ScenarioRef& s,
                              const TimingConfig& timing) {
  const int offset = s.phasing == Phasing::Early ? 0 : timing.late_offset;
  // Failures of one case are aligned on the cycle they take effect, so that
  // t1 <= t2 orders the primary before the secondary as seen by the machines.
  auto delay = [&](int f) { return m.failures.at(f).debounced() ? m.failures[f].debounce : 0; };
  int slowest = delay(c.primary);
  if (c.secondary) slowest = std::max(slowest, delay(*c.secondary));
  FailureScenario sc;
  sc.onsets.push_back(Onset{c.primary, s.t1 + offset + slowest - delay(c.primary)});
  if (c.secondary) {
    if (!s.t2) throw std::invalid_argument("double case scenario without a second onset");
    sc.onsets.push_back(Onset{*c.secondary, *s.t2 + offset + slowest - delay(*c.secondary)});
  }
  sc.inputs.resize(m.signals.size());
  if (int a = m.signal_index("Activation"); a >= 0)
    sc.inputs[a] = Waveform::rising(timing.activation_cycle);
  if (int d = m.signal_index("Deactivation"); d >= 0 && s.phasing == Phasing::Deact)
    sc.inputs[d] = Waveform::rising(timing.deactivation_cycle);
  return sc;
}

CaseSpecs prepare_case(const SystemModel& m, const FailureMatrix& fm,
                       const std::vector<SpecTemplate>& library, const FailureCase& c) {
  CaseSpecs cs;
  cs.c = c;
  cs.target = target_mode(fm, m, c);
  cs.specs = specs_for_case(m, c, cs.target, library);
  if (c.secondary) {
    FailureCase sw = c.swapped();
    cs.swapped_target = target_mode(fm, m, sw);
    if (cs.swapped_target != cs.target) cs.swapped_specs = specs_for_case(m, sw, cs.swapped_target, library);
  }
  return cs;
}

namespace {

struct SpecFailure {
  std::string spec;
  int position;
};

std::optional<SpecFailure> first_failure(const std::vector<InstantiatedSpec>& specs,
                                         const SystemModel& m, const Trace& t) {
  for (const auto& s : specs) {
    Verdict v = evaluate(s.formula, m, t);
    if (!v.holds) return SpecFailure{s.name, *v.violation};
  }
  return std::nullopt;
}

int effect_cycle(const SystemModel& m, const Onset& o) {
  const Failure& f = m.failures.at(o.failure);
  return o.cycle + (f.debounced() ? f.debounce : 0);
}

// The matrix orders a pair by settled effects: the pair is ordered only
// when, just before the secondary bites, the machines already sit where the
// primary alone brings them to rest.
bool settled_before(const SystemModel& m, const FailureScenario& sc, const Trace& t, int until,
                    int max_depth) {
  if (until <= 0) return false;
  FailureScenario alone = sc;
  alone.onsets.resize(1);
  const Trace p = require_stationary(m, alone, max_depth);
  const auto& rest = p.states[static_cast<std::size_t>(*p.loop)].machines;
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(until - 1), t.states.size() - 1);
  return t.states[k].machines == rest;
}

}  // namespace

CaseResult verify_case(const SystemModel& m, const CaseSpecs& cs, const VerifyConfig& cfg) {
  cfg.check();
  const auto start = std::chrono::steady_clock::now();
  CaseResult r;
  r.c = cs.c;
  r.id = cs.c.id(m);
  r.target = cs.target;
  const bool disagree = cs.c.secondary && cs.swapped_target != cs.target;
  if (disagree)
    r.diagnostics.push_back("unordered onsets accept either ordering: " + r.id + " -> " + cs.target +
                            ", " + cs.c.swapped().id(m) + " -> " + cs.swapped_target);

  for (const ScenarioRef& ref : enumerate_scenarios(cs.c, cfg)) {
    FailureScenario sc = make_scenario(m, cs.c, ref, cfg.timing);
    Trace t;
    try {
      t = require_stationary(m, sc, cfg.timing.max_depth);
    } catch (const NoStationaryState& e) {
      ++r.scenarios_checked;
      r.verdict = VerdictKind::EngineError;
      r.error = e.what();
      r.scenario = ref;
      r.spec.clear();
      r.position = -1;
      r.trace.reset();
      break;
    }
    ++r.scenarios_checked;
    auto fail = first_failure(cs.specs, m, t);
    if (fail && disagree && !first_failure(cs.swapped_specs, m, t) &&
        !settled_before(m, sc, t, effect_cycle(m, sc.onsets[1]), cfg.timing.max_depth))
      fail.reset();
    if (fail && r.verdict == VerdictKind::Pass) {
      r.verdict = VerdictKind::Violation;
      r.spec = fail->spec;
      r.position = fail->position;
      r.scenario = ref;
      r.trace = std::move(t);
      if (cfg.short_circuit) break;
    }
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

TimingStats timing_stats(std::vector<double> v) {
  TimingStats s;
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    double pos = p * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
  };
  s.min = v.front();
  s.q1 = q(0.25);
  s.median = q(0.5);
  s.q3 = q(0.75);
  s.max = v.back();
  return s;
}

SweepReport verify_sweep(const SystemModel& m, const FailureMatrix& fm,
                         const std::vector<SpecTemplate>& library,
                         const std::vector<FailureCase>& cases, const VerifyConfig& cfg, int workers) {
  cfg.check();
  SweepReport rep;
  rep.results.resize(cases.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      CaseResult& r = rep.results[i];
      try {
        r = verify_case(m, prepare_case(m, fm, library, cases[i]), cfg);
      } catch (const std::exception& e) {
        r = CaseResult{};
        r.c = cases[i];
        r.id = cases[i].id(m);
        r.verdict = VerdictKind::EngineError;
        r.error = e.what();
      }
    }
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(cases.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::map<std::string, std::vector<double>> times;
  for (const auto& r : rep.results) {
    switch (r.verdict) {
      case VerdictKind::Pass: ++rep.passed; break;
      case VerdictKind::Violation: ++rep.violated; break;
      case VerdictKind::EngineError: ++rep.errors; break;
    }
    times[r.target.empty() ? "?" : r.target].push_back(r.wall_ms);
  }
  for (auto& [mode, v] : times) rep.by_target[mode] = timing_stats(std::move(v));
  return rep;
}

std::string report_json(const SystemModel& m, const SweepReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["model"] = m.name;
  j["cases"] = r.results.size();
  j["passed"] = r.passed;
  j["violations"] = r.violated;
  j["engine_errors"] = r.errors;
  ordered_json groups = ordered_json::object();
  for (const auto& [mode, st] : r.by_target) groups[mode] = st.count;
  j["cases_by_target"] = groups;
  ordered_json results = ordered_json::array();
  for (const auto& c : r.results) {
    ordered_json e;
    e["case"] = c.id;
    e["target"] = c.target;
    e["verdict"] = std::string(to_string(c.verdict));
    e["scenarios"] = c.scenarios_checked;
    if (c.verdict == VerdictKind::Violation) {
      e["spec"] = c.spec;
      e["position"] = c.position;
    }
    if (c.scenario) {
      ordered_json s;
      s["phasing"] = std::string(to_string(c.scenario->phasing));
      s["t1"] = c.scenario->t1;
      if (c.scenario->t2) s["t2"] = *c.scenario->t2;
      e["scenario"] = s;
    }
    if (!c.error.empty()) e["error"] = c.error;
    if (!c.diagnostics.empty()) e["diagnostics"] = c.diagnostics;
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

std::string report_csv(const SweepReport& r) {
  std::ostringstream os;
  os << "case,target,verdict,scenarios,wall_ms\n";
  os << std::fixed << std::setprecision(3);
  for (const auto& c : r.results)
    os << c.id << ',' << c.target << ',' << to_string(c.verdict) << ',' << c.scenarios_checked << ','
       << c.wall_ms << '\n';
  return os.str();
}

std::string timing_json(const SweepReport& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [mode, s] : r.by_target)
    j[mode] = {{"count", s.count}, {"min_ms", s.min}, {"q1_ms", s.q1}, {"median_ms", s.median},
               {"q3_ms", s.q3}, {"max_ms", s.max}};
  return j.dump(2) + "\n";
}

int default_workers() {
  if (const char* env = std::getenv("FOV_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace fov
