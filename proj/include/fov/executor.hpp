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

#ifndef FOV_EXECUTOR_HPP_
#define FOV_EXECUTOR_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fov/model.hpp"

namespace fov {

/**
 * One synchronous snapshot. Vectors are indexed like the model's machines,
 * links, failures, signals and modes.
 */
struct SystemState {
  int cycle = 0;
  std::vector<MachineState> machines;
  std::vector<Observed> delivered;
  std::vector<std::uint8_t> debounce;
  std::vector<std::uint8_t> active;
  std::vector<std::uint8_t> inputs;
  std::vector<std::uint8_t> modes;

  /// Equality of everything except the cycle index.
  bool same_configuration(const SystemState& o) const {
    return machines == o.machines && delivered == o.delivered &&
           debounce == o.debounce && active == o.active && inputs == o.inputs &&
           modes == o.modes;
  }
  friend bool operator==(const SystemState&, const SystemState&) = default;
};

/// Boolean input as a list of toggle cycles; false before the first edge.
struct Waveform {
  std::vector<int> edges;

  bool at(int cycle) const;
  static Waveform rising(int cycle) { return Waveform{{cycle}}; }
  friend bool operator==(const Waveform&, const Waveform&) = default;
};

struct Onset {
  int failure = -1;
  int cycle = 0;
  friend bool operator==(const Onset&, const Onset&) = default;
};

/// Failures are persistent from their onset; at most two per scenario.
struct FailureScenario {
  std::vector<Onset> onsets;
  std::vector<Waveform> inputs;  // per model signal; missing means constant false

  /// Cycle after which nothing external changes any more.
  int last_event() const;
  int onset_of(int failure) const;  // -1 when not part of the scenario
  bool input(int signal, int cycle) const;
  friend bool operator==(const FailureScenario&, const FailureScenario&) = default;
};

struct Trace {
  std::vector<SystemState> states;
  std::optional<int> loop;  // states[loop] repeats forever
};

class NoStationaryState : public std::runtime_error {
 public:
  explicit NoStationaryState(int depth)
      : std::runtime_error("no stationary state within " + std::to_string(depth) + " cycles"),
        depth_(depth) {}
  int depth() const { return depth_; }

 private:
  int depth_;
};

SystemState initial_state(const SystemModel& m);
/// Initial state with the scenario's cycle-0 failure flags and inputs.
SystemState initial_state(const SystemModel& m, const FailureScenario& scenario);

/// One synchronous cycle. Guards read link values carrying the previous
/// cycle's sender states, failure flags of the new cycle and latched inputs.
SystemState step(const SystemModel& m, const SystemState& s, const FailureScenario& scenario);

/**
 * Runs from the initial state until two consecutive states agree and no
 * scenario event is pending, or until max_depth steps. The returned trace
 * ends with the repeated state, so `states[*loop] == states[*loop + 1]`.
 * Without a repeat the loop position is empty; callers decide whether that
 * is an error (see require_stationary).
 */
Trace simulate(const SystemModel& m, const FailureScenario& scenario, int max_depth);

/// simulate(), throwing NoStationaryState when no loop position is found.
Trace require_stationary(const SystemModel& m, const FailureScenario& scenario, int max_depth);

/// Smallest index L >= quiet_from with a constant suffix of length >= 2.
std::optional<int> find_stationary(const Trace& trace, int quiet_from = 0);

/// Mode flags as the predicates evaluate on a machine-state vector.
std::vector<std::uint8_t> evaluate_modes(const SystemModel& m,
                                         const std::vector<MachineState>& machines);

std::string dump_trace_text(const SystemModel& m, const Trace& t);
std::string dump_trace_json(const SystemModel& m, const Trace& t);

}  // namespace fov

#endif  // FOV_EXECUTOR_HPP_
