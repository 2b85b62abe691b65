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

#ifndef FOV_QUALIFICATION_HPP_
#define FOV_QUALIFICATION_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fov/catalog.hpp"
#include "fov/ltl.hpp"
#include "fov/model.hpp"
#include "fov/verifier.hpp"

namespace fov {

enum class MutationKind : std::uint8_t {
  NegateTarget,
  NegateBoth,
  DropTransition,
  FlipGuardLiteral,
  CorruptMatrixCell,
  DisableDebounce,
};

std::string_view to_string(MutationKind k);
MutationKind parse_mutation_kind(std::string_view s);

/// A formula that is not G (condition -> target).
class SpecShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown machine, transition, literal, failure or matrix cell.
class MutationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mutation {
  MutationKind kind = MutationKind::NegateTarget;
  std::string spec;     // Negate*: template name
  std::string machine;  // DropTransition, FlipGuardLiteral
  int index = -1;       // transition index within the machine, 0-based
  int literal = -1;     // FlipGuardLiteral: atom in preorder, 0-based
  std::string primary, secondary, mode;  // CorruptMatrixCell; secondary empty = diagonal
  std::string failure;                   // DisableDebounce

  std::string description(const SystemModel& m) const;
};

/// Condition and target of G (condition -> target).
std::pair<Formula, Formula> split_implication(const Formula& f);

/**
 * NegateTarget gives G (c -> !t). NegateBoth gives (G !c) -> G !t: the
 * negated condition is read over the whole run, so the result holds on
 * every run that reaches the condition at least once.
 */
Formula mutate_specification(const Formula& f, MutationKind kind);

/// Structural copy of `m` with one model mutation applied.
SystemModel inject_model_mutation(const SystemModel& m, const Mutation& mu);
/// Copy of `fm` with a CorruptMatrixCell mutation applied.
FailureMatrix inject_matrix_mutation(const FailureMatrix& fm, const Mutation& mu);

enum class Outcome : std::uint8_t { Pass, Violation, EngineError };
std::string_view to_string(Outcome o);

struct SuiteEntry {
  Mutation mutation;
  std::vector<std::string> cases;  // case ids; empty means derived from the mutation
  std::optional<Phasing> phasing;  // empty: all phasings, or late/deact for spec mutations
  Outcome expect = Outcome::Violation;
  int line = 0;
};

/**
 * Suite files hold one mutation per line:
 *
 *   negate-target    spec=NAME case=ID [phasing=P] [expect=...]
 *   negate-both      spec=NAME case=ID [phasing=P] [expect=...]
 *   drop-transition  machine=M index=I case=ID[,ID...]
 *   flip-literal     machine=M index=I literal=K case=ID[,ID...]
 *   corrupt-cell     primary=F [secondary=F] mode=MODE [case=...]
 *   disable-debounce failure=F [case=...]
 *
 * `#` starts a comment. expect defaults to pass for negate-both and to
 * violation otherwise.
 */
std::vector<SuiteEntry> parse_suite(std::string_view text);
std::vector<SuiteEntry> load_suite(const std::string& path);

struct QualificationEntry {
  std::string description;
  Outcome expected = Outcome::Violation;
  Outcome observed = Outcome::Pass;
  std::string detail;  // violating case and spec, or the engine error
  std::vector<std::string> model_diagnostics;
  bool ok() const { return expected == observed; }
};

struct QualificationReport {
  bool baseline_ok = true;
  std::string baseline_detail;
  std::vector<QualificationEntry> entries;

  /// "pass", "fail" or "baseline-failed".
  std::string status() const;
  bool pass() const;
};

/**
 * Baseline sweep (all singles and every case named by the suite), then each
 * entry against its mutated copy. A failing baseline leaves the entries
 * empty. Throws std::invalid_argument for an empty suite or one that misses
 * a mutation kind.
 */
QualificationReport run_qualification(const SystemModel& m, const FailureMatrix& fm,
                                      const std::vector<SpecTemplate>& library,
                                      const std::vector<SuiteEntry>& suite, const VerifyConfig& cfg,
                                      int workers);

/// Representative case and phasing for one template: the first case in
/// catalog order whose instantiated condition is reached in every scenario.
struct Representative {
  std::string spec;
  FailureCase c;
  Phasing phasing = Phasing::Late;
};

std::optional<Representative> pick_representative(const SystemModel& m, const FailureMatrix& fm,
                                                  const std::vector<SpecTemplate>& library,
                                                  const SpecTemplate& t, const VerifyConfig& cfg);

/// Baseline, NegateTarget and NegateBoth for every template of the library.
QualificationReport run_spec_validation(const SystemModel& m, const FailureMatrix& fm,
                                        const std::vector<SpecTemplate>& library,
                                        const VerifyConfig& cfg, int workers);

std::string qualification_json(const QualificationReport& r);
std::string qualification_summary(const QualificationReport& r);

}  // namespace fov

#endif  // FOV_QUALIFICATION_HPP_
