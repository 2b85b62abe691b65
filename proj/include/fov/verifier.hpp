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

#ifndef FOV_VERIFIER_HPP_
#define FOV_VERIFIER_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fov/catalog.hpp"
#include "fov/executor.hpp"
#include "fov/ltl.hpp"
#include "fov/model.hpp"

namespace fov {

/**
 * When failures strike relative to the external commands:
 *   Early  onsets from cycle 0, while the system is still activating
 *   Late   onsets shifted by late_offset, after nominal mode is reached
 *   Deact  as Late, plus a deactivation request at deactivation_cycle
 */
enum class Phasing : std::uint8_t { Early, Late, Deact };

std::string_view to_string(Phasing p);
Phasing parse_phasing(std::string_view s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyConfig {
  TimingConfig timing;
  std::vector<Phasing> phasings{Phasing::Early, Phasing::Late, Phasing::Deact};
  /// Stop at the first violating scenario of a case.
  bool short_circuit = true;

  static VerifyConfig from(const TimingConfig& t) { return VerifyConfig{t}; }
  /// Throws ConfigError describing the first inconsistency.
  void check() const;
};

/// Replayable coordinates of one scenario of a case.
struct ScenarioRef {
  Phasing phasing = Phasing::Early;
  int t1 = 0;
  std::optional<int> t2;

  std::string to_string() const;
  friend bool operator==(const ScenarioRef&, const ScenarioRef&) = default;
};

/// Scenario coordinates in enumeration order: phasing, then t1, then t2 >= t1.
std::vector<ScenarioRef> enumerate_scenarios(const FailureCase& c, const VerifyConfig& cfg);

/// Builds the onsets and command waveforms for one scenario.
FailureScenario make_scenario(const SystemModel& m, const FailureCase& c, const ScenarioRef& s,
                              const TimingConfig& timing);

/// A case with its target mode and the instantiated specs. For doubles
/// the swapped ordering is kept as well, for simultaneous onsets.
struct CaseSpecs {
  FailureCase c;
  std::string target;
  std::vector<InstantiatedSpec> specs;
  std::string swapped_target;
  std::vector<InstantiatedSpec> swapped_specs;
};

CaseSpecs prepare_case(const SystemModel& m, const FailureMatrix& fm,
                       const std::vector<SpecTemplate>& library, const FailureCase& c);

enum class VerdictKind : std::uint8_t { Pass, Violation, EngineError };

std::string_view to_string(VerdictKind k);

struct CaseResult {
  FailureCase c;
  std::string id;
  std::string target;
  VerdictKind verdict = VerdictKind::Pass;
  std::string spec;                     // violated spec
  std::optional<ScenarioRef> scenario;  // violating or failing scenario
  int position = -1;                    // violation position in the trace
  std::optional<Trace> trace;
  std::string error;
  std::vector<std::string> diagnostics;
  int scenarios_checked = 0;
  double wall_ms = 0.0;
};

CaseResult verify_case(const SystemModel& m, const CaseSpecs& cs, const VerifyConfig& cfg);

struct TimingStats {
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Linear-interpolated quartiles of a sample.
TimingStats timing_stats(std::vector<double> samples);

struct SweepReport {
  std::vector<CaseResult> results;  // in case order
  std::size_t passed = 0, violated = 0, errors = 0;
  std::map<std::string, TimingStats> by_target;

  bool all_pass() const { return violated == 0 && errors == 0; }
};

/// Verifies every case. Workers pull cases from a shared counter; results
/// land at their case index, so the report does not depend on scheduling.
SweepReport verify_sweep(const SystemModel& m, const FailureMatrix& fm,
                         const std::vector<SpecTemplate>& library,
                         const std::vector<FailureCase>& cases, const VerifyConfig& cfg,
                         int workers = 1);

/// Deterministic JSON report; wall times are left out on purpose.
std::string report_json(const SystemModel& m, const SweepReport& r);
/// case,target,verdict,scenarios,wall_ms
std::string report_csv(const SweepReport& r);
/// Timing quartiles per target mode as JSON.
std::string timing_json(const SweepReport& r);

/// Workers from FOV_WORKERS, else the hardware concurrency.
int default_workers();

/**
 * Independent reference implementation of verify_case for small models.
 * It re-implements scenario enumeration, stepping and formula evaluation
 * by direct recursion over an explicitly unrolled trace.
 */
CaseResult oracle_verify(const SystemModel& m, const CaseSpecs& cs, const VerifyConfig& cfg);

}  // namespace fov

#endif  // FOV_VERIFIER_HPP_
