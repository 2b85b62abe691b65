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

#ifndef FOV_MODEL_HPP_
#define FOV_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fov {

/// The five control states every arbitration machine cycles through.
enum class MachineState : std::uint8_t { Init, Ready, Active, Passive, Failure };

/// What a receiver sees on a link: a sender state, or silence (index 5).
using Observed = std::uint8_t;
inline constexpr Observed kNoSignal = 5;
inline constexpr int kObservedValues = 6;
inline constexpr std::uint8_t kAllStatesMask = 0x1f;

std::string_view to_string(MachineState s);
std::string_view observed_name(Observed v);
std::optional<Observed> parse_observed(std::string_view name);

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

/**
 * Expression tree shared by transition guards, mode predicates and LTL
 * formulas. Guards and mode predicates are the propositional fragment.
 *
 * A StateIn atom names a machine and a set of observed values. Inside a guard
 * it reads the value delivered by the link from that machine to the guard's
 * owner; everywhere else it reads the machine's own state.
 */
struct Expr {
  enum class Op : std::uint8_t {
    True,
    False,
    StateIn,
    FailureActive,
    Debounce,
    Signal,
    ModeFlag,
    Not,
    And,
    Or,
    Implies,
    Xor,
    Next,
    Globally,
    Finally,
    Until,
    BoundedGlobally,
    BoundedFinally,
    Once,
  };

  Op op = Op::True;
  int ref = -1;              // machine, failure, signal or mode index
  std::uint8_t mask = 0;     // StateIn: bit per Observed value
  CmpOp cmp = CmpOp::Eq;     // Debounce
  int value = 0;             // Debounce
  int lo = 0, hi = 0;        // bounded operators
  std::vector<Expr> args;

  static Expr constant(bool v) { return Expr{v ? Op::True : Op::False}; }
  static Expr unary(Op op, Expr a);
  static Expr binary(Op op, Expr a, Expr b);

  bool is_atom() const;
  bool is_temporal() const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

bool compare(CmpOp op, int lhs, int rhs);
std::string_view to_string(CmpOp op);

struct Transition {
  MachineState source = MachineState::Init;
  MachineState target = MachineState::Init;
  Expr guard;
  int line = 0;

  friend bool operator==(const Transition& a, const Transition& b) {
    return a.source == b.source && a.target == b.target && a.guard == b.guard;
  }
};

struct Machine {
  std::string name;
  std::uint8_t states = kAllStatesMask;  // declared subset of MachineState
  std::vector<Transition> transitions;
  int line = 0;

  friend bool operator==(const Machine& a, const Machine& b) {
    return a.name == b.name && a.states == b.states &&
           a.transitions == b.transitions;
  }
};

struct Link {
  std::string name;
  int sender = -1;
  int receiver = -1;
  int bus = -1;
  friend bool operator==(const Link&, const Link&) = default;
};

struct Bus {
  std::string name;
  friend bool operator==(const Bus&, const Bus&) = default;
};

enum class PowerKind : std::uint8_t { Circuit, Module };

struct PowerSupply {
  std::string name;
  PowerKind kind = PowerKind::Circuit;
  std::vector<int> machines;
  friend bool operator==(const PowerSupply&, const PowerSupply&) = default;
};

enum class FailureKind : std::uint8_t {
  Function,
  Ecu,
  Link,
  Bus,
  PowerCircuit,
  PowerModule,
};

std::string_view to_string(FailureKind k);

struct Failure {
  std::string name;
  FailureKind kind = FailureKind::Function;
  int target = -1;   // machine, link, bus or power index depending on kind
  int debounce = 0;  // cycles until the failure takes effect; 0 for Function

  bool debounced() const { return kind != FailureKind::Function; }
  friend bool operator==(const Failure&, const Failure&) = default;
};

struct ModeDef {
  std::string name;
  Expr predicate;
  friend bool operator==(const ModeDef&, const ModeDef&) = default;
};

struct TimingConfig {
  int cycle_ms = 10;
  int ftti_ms = 200;
  int window = 5;     // half width of the FTTI window, cycles
  int debounce = 3;   // default debounce threshold, cycles
  int horizon = 10;   // last injected onset, relative to the phasing offset
  int max_depth = 64;
  int activation_cycle = 2;
  int late_offset = 8;
  int deactivation_cycle = 20;

  /// Throws ModelError when ftti_ms is not a multiple of cycle_ms.
  int ftti_cycles() const;
  /// Empty when consistent; otherwise a description of the first problem.
  std::optional<std::string> check() const;

  friend bool operator==(const TimingConfig&, const TimingConfig&) = default;
};

/// Parse and resolution failure, with 1-based source position when known.
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& msg, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class SystemModel {
 public:
  std::string name = "model";
  TimingConfig timing;
  std::vector<std::string> signals;
  std::vector<Machine> machines;
  std::vector<Bus> buses;
  std::vector<Link> links;
  std::vector<PowerSupply> power;
  std::vector<Failure> failures;
  std::vector<ModeDef> modes;
  std::string matrix_path;  // as written in the document, may be empty

  /// Rebuilds the lookup tables below. Call after any structural edit.
  void finalize();

  int machine_index(std::string_view n) const;
  int failure_index(std::string_view n) const;
  int signal_index(std::string_view n) const;
  int mode_index(std::string_view n) const;
  int link_index(std::string_view n) const;
  int bus_index(std::string_view n) const;
  int power_index(std::string_view n) const;

  /// Link carrying `sender` to `receiver`, or -1.
  int link_between(int sender, int receiver) const {
    return link_matrix_[sender * machines.size() + receiver];
  }
  /// Failures that silence link `l` once debounced.
  const std::vector<int>& link_triggers(int l) const { return link_triggers_[l]; }
  /// ECU and power failures that shut machine `m` down once debounced.
  const std::vector<int>& shutdown_triggers(int m) const {
    return shutdown_triggers_[m];
  }

  friend bool operator==(const SystemModel& a, const SystemModel& b) {
    return a.name == b.name && a.timing == b.timing && a.signals == b.signals &&
           a.machines == b.machines && a.buses == b.buses &&
           a.links == b.links && a.power == b.power &&
           a.failures == b.failures && a.modes == b.modes &&
           a.matrix_path == b.matrix_path;
  }

 private:
  std::vector<int> link_matrix_;
  std::vector<std::vector<int>> link_triggers_;
  std::vector<std::vector<int>> shutdown_triggers_;
};

/// Parses the line-oriented model format (see docs/model-format.md).
SystemModel parse_model(std::string_view text);
SystemModel load_model(const std::string& path);
std::string print_model(const SystemModel& m);

/// Renders an expression in the concrete syntax accepted by the parsers.
std::string print_expr(const Expr& e, const SystemModel& m);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  int line = 0;
};

std::vector<Diagnostic> validate_model(const SystemModel& m);
bool has_errors(const std::vector<Diagnostic>& diags);

/// Failure ids in declaration order.
std::vector<std::string> failure_catalog(const SystemModel& m);

/// Which identifiers an expression parser may resolve and how.
struct ParseContext {
  const SystemModel* model = nullptr;
  bool allow_temporal = false;
  bool allow_modes = false;
  int line = 1;  // line of the first character, for diagnostics
};

/// Expression/formula parser. Bounds may use FTTI, WINDOW and DEBOUNCE.
Expr parse_expr(std::string_view text, const ParseContext& ctx);

}  // namespace fov

#endif  // FOV_MODEL_HPP_
