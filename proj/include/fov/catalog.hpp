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

#ifndef FOV_CATALOG_HPP_
#define FOV_CATALOG_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fov/ltl.hpp"
#include "fov/model.hpp"

namespace fov {

/// One or two failures; the primary occurs at or before the secondary.
struct FailureCase {
  int order = 1;
  int primary = -1;
  std::optional<int> secondary;

  /// "Name" for singles, "Primary+Secondary" for doubles.
  std::string id(const SystemModel& m) const;
  FailureCase swapped() const;
  friend bool operator==(const FailureCase&, const FailureCase&) = default;
};

/// Parses a case id as produced by FailureCase::id.
FailureCase parse_case_id(std::string_view id, const SystemModel& m);

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Target operation mode per (primary, secondary) pair. Rows are primary
 * failures, columns secondary ones, the diagonal holds single failures.
 * Cells name a declared mode; an empty cell is a missing entry.
 */
class FailureMatrix {
 public:
  FailureMatrix() = default;
  explicit FailureMatrix(std::vector<std::string> failures);

  const std::vector<std::string>& failures() const { return failures_; }
  std::size_t size() const { return failures_.size(); }

  /// Throws MatrixError for unknown names or an empty cell.
  const std::string& at(std::string_view primary, std::string_view secondary) const;
  const std::string& at(std::size_t primary, std::size_t secondary) const;
  void set(std::size_t primary, std::size_t secondary, std::string mode);

  /// Cells that are empty, as (row, column) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> missing() const;
  /// Unordered pairs whose two entries differ.
  std::vector<std::pair<std::size_t, std::size_t>> asymmetric_pairs() const;

  static FailureMatrix parse_csv(std::string_view text);
  static FailureMatrix load(const std::string& path);
  std::string to_csv() const;

  friend bool operator==(const FailureMatrix&, const FailureMatrix&) = default;

 private:
  std::size_t index(std::string_view name) const;

  std::vector<std::string> failures_;
  std::vector<std::string> cells_;  // row-major
};

/// Checks the matrix against the model: same failures in the same order,
/// every cell filled with a declared mode name.
void check_matrix(const FailureMatrix& fm, const SystemModel& m);

/// Loads the matrix named by the model's `matrix` statement. A relative
/// path is taken relative to the directory of `model_path`.
FailureMatrix load_model_matrix(const SystemModel& m, const std::string& model_path);

/// All singles, then ordered pairs (primary-major), in catalog order.
std::vector<FailureCase> enumerate_cases(const SystemModel& m, int max_order);

std::string target_mode(const FailureMatrix& fm, const SystemModel& m, const FailureCase& c);

/// A library template filled in for one case.
struct InstantiatedSpec {
  std::string name;
  SpecScope scope = SpecScope::Always;
  std::string text;
  Formula formula;
};

/// Name of the mode that means "no machine is active".
inline constexpr std::string_view kStopMode = "Inactive";

/// Detection expression of a failure: the flag itself for function
/// failures, debounce expiry for the others.
std::string detect_expr(const SystemModel& m, int failure);

/**
 * Fills the library for a case with target `target`:
 *   always    every case
 *   debounce  order-1 cases of a debounced failure
 *   single    order-1 cases whose target is not the stop mode
 *   double    order-2 cases whose target is not the stop mode
 *   stop      cases targeting the stop mode
 * Throws MatrixError when the target is not a declared mode.
 */
std::vector<InstantiatedSpec> specs_for_case(const SystemModel& m, const FailureCase& c,
                                             const std::string& target,
                                             const std::vector<SpecTemplate>& library);

}  // namespace fov

#endif  // FOV_CATALOG_HPP_
