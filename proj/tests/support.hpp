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

// Generators and checks shared by the unit tests and the acceptance binary.

#ifndef FOV_TESTS_SUPPORT_HPP_
#define FOV_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fov/catalog.hpp"
#include "fov/executor.hpp"
#include "fov/ltl.hpp"
#include "fov/model.hpp"
#include "fov/qualification.hpp"
#include "fov/verifier.hpp"

namespace fov::testing {

std::string data_path(const std::string& rel);

struct Bundle {
  SystemModel model;
  FailureMatrix matrix;
  std::vector<SpecTemplate> library;
};

/// Model, its matrix and a spec library, all relative to the data directory.
Bundle load_bundle(const std::string& model, const std::string& specs);
Bundle reference_bundle();
/// asym, duplex and chain.
std::vector<std::pair<std::string, Bundle>> toy_bundles();

/// Random lasso over the model's vectors: 1..max_len distinct positions,
/// stored with the repeated last state as the executor does.
Trace random_lasso(const SystemModel& m, std::mt19937& rng, int max_len);
/// Random formula text over the model's atoms with nesting up to `depth`.
std::string random_formula(const SystemModel& m, std::mt19937& rng, int depth);

enum class Law {
  GloballyDual,         // G p == !F !p
  BoundedDual,          // G[a,b] p == !F[a,b] !p
  LoopConsistency,      // G p holds iff p holds at 0..L
  BoundedWindow,        // G[a,b] p at i == p on [i+a, i+b], unrolled
  OnceMonotone,         // O p never drops back to false
  NextGlobally,         // X G p == G X p
  UntilFinally,         // F p == true U p
  EarliestViolation,    // G p reports the first position where p fails
};

std::string to_string(Law law);
std::vector<Law> all_laws();

struct LawRun {
  int traces = 0;
  int failures = 0;
  std::string first_counterexample;
};

/// Checks one law on `traces` random lassos over `m`.
LawRun check_law(Law law, const SystemModel& m, std::uint32_t seed, int traces);

/// Small random model: 2..4 machines, random links, buses, power supplies
/// and per-failure debounce thresholds; guards read observed states only.
std::string random_model_text(std::mt19937& rng);

/**
 * Debounce property for every debounced failure and onset in [0, horizon]:
 * machines and delivered values agree with the failure-free run before
 * onset + debounce, and at that cycle every affected link is silent.
 * Returns an empty string or the first counterexample.
 */
std::string debounce_property(const SystemModel& m, const std::vector<Phasing>& phasings);

struct OracleRun {
  std::size_t cases = 0;
  std::size_t agree = 0;
  std::size_t violations = 0;  // cases where both report a violation
  std::vector<std::string> mismatches;
};

/// verify_case against oracle_verify on every case, comparing verdict,
/// and for violations spec, scenario and position.
OracleRun compare_with_oracle(const SystemModel& m, const FailureMatrix& fm,
                              const std::vector<SpecTemplate>& library,
                              const std::vector<FailureCase>& cases, const VerifyConfig& cfg);
/// Same, with explicitly prepared specs (for spec mutants).
OracleRun compare_with_oracle(const SystemModel& m, const std::vector<CaseSpecs>& prepared,
                              const VerifyConfig& cfg);

/// A seeded mutant of a toy: model, matrix, or negated spec.
struct Mutant {
  std::string description;
  SystemModel model;
  FailureMatrix matrix;
  std::string negated_spec;  // empty unless the mutant negates a spec target
};

std::vector<Mutant> seeded_mutants(const Bundle& b, std::uint32_t seed, int count);
OracleRun compare_mutant(const Bundle& b, const Mutant& mu, const VerifyConfig& cfg);

/// Re-simulates every violation and compares the trace dump and position.
/// Returns the number of replays checked; mismatches are appended.
int replay_violations(const SystemModel& m, const FailureMatrix& fm,
                      const std::vector<SpecTemplate>& library, const SweepReport& r,
                      const VerifyConfig& cfg, std::vector<std::string>& mismatches);

}  // namespace fov::testing

#endif  // FOV_TESTS_SUPPORT_HPP_
