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

// fov: command line front end.
//
// Exit status: 0 all checks pass, 1 a violation or failed qualification,
// 2 an engine or configuration error, 64 a usage error. A qualification
// whose baseline fails exits 1 and reports status "baseline-failed".

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fov/catalog.hpp"
#include "fov/executor.hpp"
#include "fov/ltl.hpp"
#include "fov/model.hpp"
#include "fov/qualification.hpp"
#include "fov/verifier.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kEngine = 2;
constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  std::string specs;
  std::string matrix;
  std::string suite;
  std::string out = "fov-out";
  std::string case_id;
  std::string filter;
  std::string phasing;
  int order = 2;
  int horizon = -1;
  int max_depth = -1;
  int workers = 0;
  std::uint64_t seed = 0;
  int t1 = 0;
  int t2 = -1;
  bool json = false;
  bool all_scenarios = false;
};

struct Loaded {
  fov::SystemModel model;
  fov::FailureMatrix matrix;
  std::vector<fov::SpecTemplate> library;
  fov::VerifyConfig cfg;
};

bool glob_match(std::string_view pat, std::string_view s) {
  std::size_t p = 0, i = 0, star = std::string_view::npos, mark = 0;
  while (i < s.size()) {
    if (p < pat.size() && (pat[p] == '?' || pat[p] == s[i])) {
      ++p;
      ++i;
    } else if (p < pat.size() && pat[p] == '*') {
      star = p++;
      mark = i;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      i = ++mark;
    } else {
      return false;
    }
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing --") + what);
  if (!std::filesystem::is_regular_file(path))
    throw UsageError(std::string(what) + " file '" + path + "' does not exist");
}

Loaded load(const Options& o, bool need_specs) {
  require_file(o.model, "model");
  Loaded l;
  l.model = fov::load_model(o.model);
  auto diags = fov::validate_model(l.model);
  for (const auto& d : diags)
    std::cerr << o.model << ":" << d.line << ": "
              << (d.severity == fov::Diagnostic::Severity::Error ? "error: " : "warning: ") << d.message
              << "\n";
  if (fov::has_errors(diags)) throw fov::ModelError("model '" + o.model + "' is not valid", 0, 0);

  if (!o.matrix.empty()) {
    require_file(o.matrix, "matrix");
    l.matrix = fov::FailureMatrix::load(o.matrix);
  } else {
    l.matrix = fov::load_model_matrix(l.model, o.model);
  }
  fov::check_matrix(l.matrix, l.model);

  if (need_specs) {
    require_file(o.specs, "specs");
    l.library = fov::load_spec_library(o.specs);
  }

  fov::TimingConfig t = l.model.timing;
  if (o.horizon >= 0) t.horizon = o.horizon;
  if (o.max_depth >= 0) t.max_depth = o.max_depth;
  l.cfg = fov::VerifyConfig::from(t);
  if (!o.phasing.empty()) l.cfg.phasings = {fov::parse_phasing(o.phasing)};
  l.cfg.short_circuit = !o.all_scenarios;
  l.cfg.check();
  return l;
}

int workers(const Options& o) { return o.workers > 0 ? o.workers : fov::default_workers(); }

fov::FailureCase lookup_case(const Loaded& l, const std::string& id) {
  try {
    return fov::parse_case_id(id, l.model);
  } catch (const std::invalid_argument& e) {
    std::ostringstream os;
    os << e.what() << "; valid failure ids:";
    for (const auto& f : fov::failure_catalog(l.model)) os << ' ' << f;
    os << " (doubles are written A+B)";
    throw UsageError(os.str());
  }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << text;
}

void print_violation(const fov::SystemModel& m, const fov::CaseResult& r) {
  std::cout << r.id << ": " << fov::to_string(r.verdict);
  if (r.verdict == fov::VerdictKind::Violation)
    std::cout << " of " << r.spec << " at position " << r.position << " (" << r.scenario->to_string() << ")";
  if (r.verdict == fov::VerdictKind::EngineError) {
    std::cout << ": " << r.error;
    if (r.scenario) std::cout << " (" << r.scenario->to_string() << ")";
  }
  std::cout << "\n";
  (void)m;
}

int verdict_status(fov::VerdictKind k) {
  switch (k) {
    case fov::VerdictKind::Pass: return kPass;
    case fov::VerdictKind::Violation: return kViolation;
    case fov::VerdictKind::EngineError: return kEngine;
  }
  return kEngine;
}

int cmd_catalog(const Options& o) {
  require_file(o.model, "model");
  fov::SystemModel m = fov::load_model(o.model);
  auto cases = fov::enumerate_cases(m, o.order);
  std::size_t shown = 0;
  for (const auto& c : cases) {
    std::string id = c.id(m);
    if (!o.filter.empty() && !glob_match(o.filter, id)) continue;
    std::cout << id << "\n";
    ++shown;
  }
  std::cerr << shown << " of " << cases.size() << " cases\n";
  return kPass;
}

int cmd_check(const Options& o) {
  if (o.case_id.empty()) throw UsageError("check needs --case");
  Loaded l = load(o, true);
  fov::FailureCase c = lookup_case(l, o.case_id);
  fov::CaseSpecs cs = fov::prepare_case(l.model, l.matrix, l.library, c);
  fov::CaseResult r = fov::verify_case(l.model, cs, l.cfg);
  std::cout << r.id << " -> " << r.target << ": " << fov::to_string(r.verdict) << " after "
            << r.scenarios_checked << " scenarios\n";
  for (const auto& d : r.diagnostics) std::cout << "  note: " << d << "\n";
  if (r.verdict != fov::VerdictKind::Pass) print_violation(l.model, r);
  if (r.trace) {
    std::filesystem::path p = std::filesystem::path(o.out) / (r.id + ".trace.json");
    write_file(p, fov::dump_trace_json(l.model, *r.trace));
    std::cout << "counterexample: " << p.string() << "\n";
    std::cout << fov::dump_trace_text(l.model, *r.trace);
  }
  return verdict_status(r.verdict);
}

int cmd_sweep(const Options& o) {
  Loaded l = load(o, true);
  std::vector<fov::FailureCase> cases;
  for (const auto& c : fov::enumerate_cases(l.model, o.order))
    if (o.filter.empty() || glob_match(o.filter, c.id(l.model))) cases.push_back(c);
  const auto start = std::chrono::steady_clock::now();
  fov::SweepReport rep = fov::verify_sweep(l.model, l.matrix, l.library, cases, l.cfg, workers(o));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path out(o.out);
  write_file(out / "report.json", fov::report_json(l.model, rep));
  write_file(out / "report.csv", fov::report_csv(rep));
  write_file(out / "timing.json", fov::timing_json(rep));
  for (const auto& r : rep.results)
    if (r.trace) write_file(out / "traces" / (r.id + ".trace.json"), fov::dump_trace_json(l.model, *r.trace));

  for (const auto& r : rep.results)
    if (r.verdict != fov::VerdictKind::Pass) print_violation(l.model, r);
  std::cout << rep.results.size() << " cases: " << rep.passed << " pass, " << rep.violated
            << " violation, " << rep.errors << " engine error\n";
  std::cout << std::fixed << std::setprecision(1);
  for (const auto& [mode, st] : rep.by_target)
    std::cout << "  " << std::left << std::setw(9) << mode << std::right << std::setw(6) << st.count
              << " cases  median " << st.median << " ms  max " << st.max << " ms\n";
  std::cout << "wall " << secs << " s with " << workers(o) << " workers; report in " << out.string() << "\n";
  if (rep.errors) return kEngine;
  return rep.violated ? kViolation : kPass;
}

int cmd_trace(const Options& o) {
  if (o.case_id.empty()) throw UsageError("trace needs --case");
  Loaded l = load(o, false);
  fov::FailureCase c = lookup_case(l, o.case_id);
  fov::ScenarioRef ref;
  ref.phasing = o.phasing.empty() ? fov::Phasing::Early : fov::parse_phasing(o.phasing);
  ref.t1 = o.t1;
  if (c.secondary) ref.t2 = o.t2 < 0 ? o.t1 : o.t2;
  fov::FailureScenario sc = fov::make_scenario(l.model, c, ref, l.cfg.timing);
  fov::Trace t = fov::simulate(l.model, sc, l.cfg.timing.max_depth);
  std::cout << (o.json ? fov::dump_trace_json(l.model, t) : fov::dump_trace_text(l.model, t));
  return t.loop ? kPass : kEngine;
}

int qualification_status(const fov::QualificationReport& r) {
  return r.pass() ? kPass : kViolation;
}

int cmd_validate(const Options& o) {
  Loaded l = load(o, true);
  fov::QualificationReport r = fov::run_spec_validation(l.model, l.matrix, l.library, l.cfg, workers(o));
  const std::filesystem::path out(o.out);
  write_file(out / "validation.json", fov::qualification_json(r));
  std::cout << fov::qualification_summary(r);
  return qualification_status(r);
}

int cmd_qualify(const Options& o) {
  require_file(o.suite, "suite");
  Loaded l = load(o, true);
  auto suite = fov::load_suite(o.suite);
  fov::QualificationReport r = fov::run_qualification(l.model, l.matrix, l.library, suite, l.cfg, workers(o));
  const std::filesystem::path out(o.out);
  write_file(out / "qualification.json", fov::qualification_json(r));
  std::cout << fov::qualification_summary(r);
  return qualification_status(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded model checking and fault injection for fail-operational arbitration logic"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool specs) {
    c->add_option("--model", o.model, "model file (.fom)")->required();
    if (specs) c->add_option("--specs", o.specs, "requirement library (.fos)")->required();
    c->add_option("--matrix", o.matrix, "failure matrix CSV, overrides the model's matrix statement");
    c->add_option("--horizon", o.horizon, "last onset cycle H")->check(CLI::NonNegativeNumber);
    c->add_option("--max-depth", o.max_depth, "simulation bound in cycles")->check(CLI::PositiveNumber);
    c->add_option("--workers", o.workers, "worker threads (default FOV_WORKERS or the core count)")
        ->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "output directory");
    c->add_option("--seed", o.seed, "seed, recorded for reproducibility; enumeration is deterministic");
  };

  auto* catalog = app.add_subcommand("catalog", "list failure cases");
  catalog->add_option("--model", o.model, "model file (.fom)")->required();
  catalog->add_option("--order", o.order, "1 or 2")->check(CLI::Range(1, 2));
  catalog->add_option("--filter", o.filter, "glob over case ids");

  auto* check = app.add_subcommand("check", "verify one failure case");
  common(check, true);
  check->add_option("--case", o.case_id, "case id, A or A+B")->required();
  check->add_option("--phasing", o.phasing, "early, late or deact (default all)");
  check->add_flag("--all-scenarios", o.all_scenarios, "keep going after the first violation");

  auto* sweep = app.add_subcommand("sweep", "verify every case up to an order");
  common(sweep, true);
  sweep->add_option("--order", o.order, "1 or 2")->check(CLI::Range(1, 2));
  sweep->add_option("--filter", o.filter, "glob over case ids");
  sweep->add_option("--phasing", o.phasing, "early, late or deact (default all)");

  auto* trace = app.add_subcommand("trace", "simulate one scenario and print its trace");
  common(trace, false);
  trace->add_option("--case", o.case_id, "case id, A or A+B")->required();
  trace->add_option("--phasing", o.phasing, "early, late or deact");
  trace->add_option("--t1", o.t1, "primary onset")->check(CLI::NonNegativeNumber);
  trace->add_option("--t2", o.t2, "secondary onset (default t1)")->check(CLI::NonNegativeNumber);
  trace->add_flag("--json", o.json, "JSON instead of a table");

  auto* validate = app.add_subcommand("validate", "negate every spec template and check it is caught");
  common(validate, true);

  auto* qualify = app.add_subcommand("qualify", "run a mutation suite against the engine");
  common(qualify, true);
  qualify->add_option("--suite", o.suite, "suite file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*catalog) return cmd_catalog(o);
    if (*check) return cmd_check(o);
    if (*sweep) return cmd_sweep(o);
    if (*trace) return cmd_trace(o);
    if (*validate) return cmd_validate(o);
    if (*qualify) return cmd_qualify(o);
  } catch (const UsageError& e) {
    std::cerr << "fov: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "fov: " << e.what() << "\n";
    return kEngine;
  }
  return kUsage;
}
