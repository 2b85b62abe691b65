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

// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fov/catalog.hpp"
#include "fov/qualification.hpp"
#include "fov/verifier.hpp"
#include "support.hpp"

using namespace fov;
using fov::testing::Bundle;

namespace {

// Pinned limits.
constexpr int kHorizon = 10;
constexpr int kFttiCycles = 20;
constexpr int kWindow = 5;
constexpr int kDebounce = 3;
constexpr double kSinglesLimitS = 300.0;
constexpr double kDoublesLimitS = 3600.0;
constexpr std::size_t kSingles = 48;
constexpr std::size_t kDoubles = 2256;
constexpr int kCountLawSamples = 200;
constexpr int kMaxToyMachines = 4;
constexpr int kMaxToyHorizon = 6;
constexpr int kMutantsPerToy = 12;
constexpr std::size_t kMinModelMutations = 20;
constexpr int kRandomModels = 200;
constexpr int kLassosPerLaw = 1000;
constexpr std::size_t kDeterminismSample = 300;
constexpr std::uint32_t kSeed = 20260101;

struct Result {
  bool ok = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const Bundle& reference() {
  static const Bundle b = fov::testing::reference_bundle();
  return b;
}

int workers() { return std::max(1, default_workers()); }

SweepReport singles_report;

Result criterion1() {
  const Bundle& b = reference();
  const TimingConfig& t = b.model.timing;
  Result o;
  if (t.horizon != kHorizon || t.ftti_cycles() != kFttiCycles || t.window != kWindow || t.debounce != kDebounce) {
    o.ok = false;
    o.detail = "timing differs from H=10 FTTI=20 window=5 debounce=3";
    return o;
  }
  const auto t0 = std::chrono::steady_clock::now();
  singles_report = verify_sweep(b.model, b.matrix, b.library, enumerate_cases(b.model, 1), VerifyConfig::from(t),
                                workers());
  const double s = seconds_since(t0);
  std::size_t scenarios = 0;
  for (const auto& r : singles_report.results) scenarios += static_cast<std::size_t>(r.scenarios_checked);
  o.ok = singles_report.results.size() == kSingles && singles_report.passed == kSingles && s < kSinglesLimitS;
  o.detail = std::to_string(singles_report.passed) + "/" + std::to_string(singles_report.results.size()) +
             " singles pass, " + std::to_string(scenarios) + " scenarios, " + fixed(s, 2) + " s (limit " +
             fixed(kSinglesLimitS, 0) + " s)";
  return o;
}

Result criterion2() {
  const SystemModel& m = reference().model;
  const auto cases = enumerate_cases(m, 2);
  std::size_t singles = 0, doubles = 0;
  for (const auto& c : cases) (c.order == 1 ? singles : doubles)++;
  Result o;
  o.ok = failure_catalog(m).size() == kSingles && singles == kSingles && doubles == kDoubles;

  std::mt19937 rng(kSeed);
  std::uniform_int_distribution<int> size(1, 60);
  int law_failures = 0;
  for (int i = 0; i < kCountLawSamples; ++i) {
    const int n = size(rng);
    std::string text = "model n\nmachine A states Ready\n";
    for (int k = 0; k < n; ++k) text += "failure F" + std::to_string(k) + " function A\n";
    const auto got = enumerate_cases(parse_model(text), 2).size();
    if (got != static_cast<std::size_t>(n + n * (n - 1))) ++law_failures;
  }
  o.ok = o.ok && law_failures == 0;
  o.detail = std::to_string(singles) + " singles, " + std::to_string(doubles) + " doubles; n+n(n-1) on " +
             std::to_string(kCountLawSamples) + " random n: " + std::to_string(law_failures) + " failures";
  return o;
}

Result criterion3() {
  const Bundle& b = reference();
  std::vector<FailureCase> doubles;
  for (const auto& c : enumerate_cases(b.model, 2))
    if (c.order == 2) doubles.push_back(c);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepReport r =
      verify_sweep(b.model, b.matrix, b.library, doubles, VerifyConfig::from(b.model.timing), workers());
  const double s = seconds_since(t0);

  std::size_t stop_cases = 0, stop_checked = 0;
  for (const auto& res : r.results) {
    if (res.target != kStopMode) continue;
    ++stop_cases;
    const auto specs = specs_for_case(b.model, res.c, res.target, b.library);
    for (const auto& sp : specs)
      if (sp.scope == SpecScope::Stop && res.verdict == VerdictKind::Pass) ++stop_checked;
  }
  Result o;
  o.ok = r.results.size() == kDoubles && r.errors == 0 && r.violated == 0 && stop_checked == stop_cases &&
         s < kDoublesLimitS;
  o.detail = std::to_string(r.passed) + "/" + std::to_string(r.results.size()) + " doubles pass (" +
             std::to_string(stop_cases) + " Inactive targets via the stop spec), " + std::to_string(r.errors) +
             " engine errors, " + fixed(s, 1) + " s with " + std::to_string(workers()) + " worker(s) (limit " +
             fixed(kDoublesLimitS, 0) + " s)";
  if (!o.ok && r.violated > 0)
    for (const auto& res : r.results)
      if (res.verdict != VerdictKind::Pass) {
        o.detail += "; first: " + res.id + " " + res.spec;
        break;
      }
  return o;
}

Result criterion4() {
  Result o;
  std::size_t toys = 0, cases = 0, agree = 0, mutants = 0, mutant_cases = 0, mutant_agree = 0, violations = 0;
  std::string first;
  for (const auto& [name, b] : fov::testing::toy_bundles()) {
    ++toys;
    if (static_cast<int>(b.model.machines.size()) > kMaxToyMachines || b.model.timing.horizon > kMaxToyHorizon) {
      o.ok = false;
      first = name + " exceeds the toy size limits";
    }
    const auto cfg = VerifyConfig::from(b.model.timing);
    const auto run = fov::testing::compare_with_oracle(b.model, b.matrix, b.library, enumerate_cases(b.model, 2), cfg);
    cases += run.cases;
    agree += run.agree;
    if (!run.mismatches.empty() && first.empty()) first = name + ": " + run.mismatches.front();
    for (const auto& mu : fov::testing::seeded_mutants(b, kSeed + static_cast<std::uint32_t>(toys), kMutantsPerToy)) {
      ++mutants;
      const auto mr = fov::testing::compare_mutant(b, mu, VerifyConfig::from(mu.model.timing));
      mutant_cases += mr.cases;
      mutant_agree += mr.agree;
      violations += mr.violations;
      if (!mr.mismatches.empty() && first.empty()) first = name + " / " + mu.description + ": " + mr.mismatches.front();
    }
  }
  o.ok = o.ok && toys >= 3 && agree == cases && mutant_agree == mutant_cases && violations > 0;
  o.detail = std::to_string(toys) + " toys, " + std::to_string(agree) + "/" + std::to_string(cases) + " cases agree; " +
             std::to_string(mutants) + " seeded mutants, " + std::to_string(mutant_agree) + "/" +
             std::to_string(mutant_cases) + " agree with " + std::to_string(violations) +
             " violations at the same earliest scenario";
  if (!first.empty()) o.detail += "; " + first;
  return o;
}

Result criterion5() {
  const Bundle& b = reference();
  const auto r = run_spec_validation(b.model, b.matrix, b.library, VerifyConfig::from(b.model.timing), workers());
  std::size_t ok = 0;
  std::string first;
  for (const auto& e : r.entries) {
    if (e.ok())
      ++ok;
    else if (first.empty())
      first = e.description + ": " + e.detail;
  }
  Result o;
  o.ok = r.baseline_ok && r.entries.size() == b.library.size() * 3 && ok == r.entries.size();
  o.detail = std::to_string(b.library.size()) + " templates, " + std::to_string(ok) + "/" +
             std::to_string(r.entries.size()) + " baseline/NegateTarget/NegateBoth outcomes as expected";
  if (!r.baseline_ok) o.detail += "; baseline failed: " + r.baseline_detail;
  if (!first.empty()) o.detail += "; " + first;
  return o;
}

Result criterion6() {
  const Bundle& b = reference();
  const auto suite = load_suite(fov::testing::data_path("qualification.suite"));
  const auto r = run_qualification(b.model, b.matrix, b.library, suite, VerifyConfig::from(b.model.timing), workers());
  std::size_t model_mutations = 0, detected = 0;
  std::set<MutationKind> kinds;
  std::string first;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const MutationKind k = suite[i].mutation.kind;
    if (k == MutationKind::NegateTarget || k == MutationKind::NegateBoth) continue;
    ++model_mutations;
    kinds.insert(k);
    if (i < r.entries.size() && r.entries[i].observed == Outcome::Violation && r.entries[i].ok())
      ++detected;
    else if (first.empty() && i < r.entries.size())
      first = r.entries[i].description + ": " + r.entries[i].detail;
  }
  Result o;
  o.ok = r.pass() && model_mutations >= kMinModelMutations && kinds.size() == 4 && detected == model_mutations;
  o.detail = std::to_string(detected) + "/" + std::to_string(model_mutations) + " model mutations detected across " +
             std::to_string(kinds.size()) + " kinds; suite status " + r.status();
  if (!first.empty()) o.detail += "; " + first;
  return o;
}

Result criterion7() {
  const Bundle& b = reference();
  Result o;
  const std::string ref = fov::testing::debounce_property(b.model, {Phasing::Early, Phasing::Late, Phasing::Deact});

  // The debounce and switch-over specs of every debounced single pass in
  // the criterion-1 sweep.
  std::size_t debounced = 0, passed = 0;
  for (const auto& r : singles_report.results) {
    if (!b.model.failures[static_cast<std::size_t>(r.c.primary)].debounced()) continue;
    ++debounced;
    if (r.verdict == VerdictKind::Pass) ++passed;
  }

  std::mt19937 rng(kSeed);
  int bad = 0;
  std::string first;
  for (int i = 0; i < kRandomModels; ++i) {
    const SystemModel m = parse_model(fov::testing::random_model_text(rng));
    const std::string why = fov::testing::debounce_property(m, {Phasing::Early, Phasing::Late});
    if (!why.empty()) {
      if (first.empty()) first = why;
      ++bad;
    }
  }
  o.ok = ref.empty() && debounced > 0 && passed == debounced && bad == 0;
  o.detail = "reference: " + std::string(ref.empty() ? "no early reaction" : ref) + ", " + std::to_string(passed) +
             "/" + std::to_string(debounced) + " debounced singles pass; " + std::to_string(kRandomModels - bad) +
             "/" + std::to_string(kRandomModels) + " random models hold";
  if (!first.empty()) o.detail += "; " + first;
  return o;
}

Result criterion8() {
  const SystemModel& m = reference().model;
  Result o;
  std::ostringstream os;
  int laws = 0;
  for (auto law : fov::testing::all_laws()) {
    const auto run = fov::testing::check_law(law, m, kSeed + static_cast<std::uint32_t>(laws), kLassosPerLaw);
    ++laws;
    if (run.failures != 0 || run.traces < kLassosPerLaw) {
      o.ok = false;
      os << "; " << fov::testing::to_string(law) << ": " << run.failures << " failures";
    }
  }
  o.detail = std::to_string(laws) + " laws x " + std::to_string(kLassosPerLaw) + " random lassos" + os.str();
  return o;
}

Result criterion9() {
  const Bundle& b = reference();
  Result o;
  const auto cfg = VerifyConfig::from(b.model.timing);

  // Stratified sample of doubles: every k-th pair.
  std::vector<FailureCase> sample;
  const auto all = enumerate_cases(b.model, 2);
  const std::size_t stride = kDoubles / kDeterminismSample;
  for (std::size_t i = kSingles; i < all.size(); i += stride) sample.push_back(all[i]);
  int stable = 0, compared = 0;
  ++compared;
  stable += report_json(b.model, verify_sweep(b.model, b.matrix, b.library, sample, cfg, 1)) ==
            report_json(b.model, verify_sweep(b.model, b.matrix, b.library, sample, cfg, 4));
  ++compared;
  stable += report_json(b.model, singles_report) ==
            report_json(b.model, verify_sweep(b.model, b.matrix, b.library, enumerate_cases(b.model, 1), cfg, 4));
  for (const auto& [name, t] : fov::testing::toy_bundles()) {
    const auto c = enumerate_cases(t.model, 2);
    const auto tc = VerifyConfig::from(t.model.timing);
    ++compared;
    stable += report_json(t.model, verify_sweep(t.model, t.matrix, t.library, c, tc, 1)) ==
              report_json(t.model, verify_sweep(t.model, t.matrix, t.library, c, tc, 4));
  }

  // Replays: violations of the model mutations of the bundled suite.
  std::vector<std::string> mismatches;
  int replays = 0;
  for (const auto& e : load_suite(fov::testing::data_path("qualification.suite"))) {
    const MutationKind k = e.mutation.kind;
    if (k != MutationKind::DropTransition && k != MutationKind::FlipGuardLiteral &&
        k != MutationKind::DisableDebounce)
      continue;
    const SystemModel mutant = inject_model_mutation(b.model, e.mutation);
    const auto mc = VerifyConfig::from(mutant.timing);
    const auto r = verify_sweep(mutant, b.matrix, b.library, enumerate_cases(mutant, 1), mc, workers());
    replays += fov::testing::replay_violations(mutant, b.matrix, b.library, r, mc, mismatches);
  }
  o.ok = stable == compared && replays > 0 && mismatches.empty();
  o.detail = std::to_string(stable) + "/" + std::to_string(compared) +
             " reports byte-identical for workers 1 and 4 (" + std::to_string(sample.size()) +
             "-case double sample, singles, toys); " + std::to_string(replays - static_cast<int>(mismatches.size())) +
             "/" + std::to_string(replays) + " violations replay byte-identically";
  if (!mismatches.empty()) o.detail += "; " + mismatches.front();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Result()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failed;
    std::printf("criterion %zu: %s  %s\n", i + 1, o.ok ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
