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

#include "fov/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fov {

std::string FailureCase::id(const SystemModel& m) const {
  std::string s = m.failures.at(primary).name;
  if (secondary) s += "+" + m.failures.at(*secondary).name;
  return s;
}

FailureCase FailureCase::swapped() const {
  if (!secondary) return *this;
  return FailureCase{2, *secondary, primary};
}

FailureCase parse_case_id(std::string_view id, const SystemModel& m) {
  auto lookup = [&](std::string_view n) {
    int i = m.failure_index(std::string(n));
    if (i < 0) throw std::invalid_argument("unknown failure '" + std::string(n) + "'");
    return i;
  };
  auto plus = id.find('+');
  if (plus == std::string_view::npos) return FailureCase{1, lookup(id), std::nullopt};
  FailureCase c{2, lookup(id.substr(0, plus)), lookup(id.substr(plus + 1))};
  if (c.primary == *c.secondary) throw std::invalid_argument("a double case needs two distinct failures");
  return c;
}

FailureMatrix::FailureMatrix(std::vector<std::string> failures)
    : failures_(std::move(failures)), cells_(failures_.size() * failures_.size()) {}

std::size_t FailureMatrix::index(std::string_view name) const {
  auto it = std::find(failures_.begin(), failures_.end(), name);
  if (it == failures_.end()) throw MatrixError("failure '" + std::string(name) + "' is not in the matrix");
  return static_cast<std::size_t>(it - failures_.begin());
}

const std::string& FailureMatrix::at(std::string_view primary, std::string_view secondary) const {
  return at(index(primary), index(secondary));
}

const std::string& FailureMatrix::at(std::size_t p, std::size_t s) const {
  if (p >= size() || s >= size()) throw MatrixError("matrix index out of range");
  const std::string& v = cells_[p * size() + s];
  if (v.empty())
    throw MatrixError("missing matrix entry for (" + failures_[p] + ", " + failures_[s] + ")");
  return v;
}

void FailureMatrix::set(std::size_t p, std::size_t s, std::string mode) {
  if (p >= size() || s >= size()) throw MatrixError("matrix index out of range");
  cells_[p * size() + s] = std::move(mode);
}

std::vector<std::pair<std::size_t, std::size_t>> FailureMatrix::missing() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < size(); ++p)
    for (std::size_t s = 0; s < size(); ++s)
      if (cells_[p * size() + s].empty()) out.emplace_back(p, s);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> FailureMatrix::asymmetric_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < size(); ++p)
    for (std::size_t s = p + 1; s < size(); ++s)
      if (cells_[p * size() + s] != cells_[s * size() + p]) out.emplace_back(p, s);
  return out;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line, int line_no) {
  if (line.find('"') != std::string::npos)
    throw MatrixError("line " + std::to_string(line_no) + ": quoted fields are not supported");
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

FailureMatrix FailureMatrix::parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    rows.push_back(split_csv(line, line_no));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw MatrixError("empty matrix");
  std::vector<std::string> header(rows[0].begin() + 1, rows[0].end());
  FailureMatrix fm(header);
  if (rows.size() != header.size() + 1)
    throw MatrixError("matrix has " + std::to_string(rows.size() - 1) + " rows but " +
                      std::to_string(header.size()) + " columns");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(row_lines[r]) + ": ";
    if (row.size() != header.size() + 1) throw MatrixError(where + "wrong number of cells");
    if (row[0] != header[r - 1])
      throw MatrixError(where + "row '" + row[0] + "' does not match column '" + header[r - 1] + "'");
    for (std::size_t c = 1; c < row.size(); ++c) fm.set(r - 1, c - 1, row[c]);
  }
  return fm;
}

FailureMatrix FailureMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixError("cannot read matrix file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

std::string FailureMatrix::to_csv() const {
  std::ostringstream os;
  os << "primary\\secondary";
  for (const auto& f : failures_) os << ',' << f;
  os << '\n';
  for (std::size_t p = 0; p < size(); ++p) {
    os << failures_[p];
    for (std::size_t s = 0; s < size(); ++s) os << ',' << cells_[p * size() + s];
    os << '\n';
  }
  return os.str();
}

void check_matrix(const FailureMatrix& fm, const SystemModel& m) {
  if (fm.size() != m.failures.size())
    throw MatrixError("matrix covers " + std::to_string(fm.size()) + " failures, model declares " +
                      std::to_string(m.failures.size()));
  for (std::size_t i = 0; i < fm.size(); ++i)
    if (fm.failures()[i] != m.failures[i].name)
      throw MatrixError("matrix failure #" + std::to_string(i + 1) + " is '" + fm.failures()[i] +
                        "', model declares '" + m.failures[i].name + "'");
  for (std::size_t p = 0; p < fm.size(); ++p)
    for (std::size_t s = 0; s < fm.size(); ++s) {
      const std::string& mode = fm.at(p, s);
      if (m.mode_index(mode) < 0)
        throw MatrixError("matrix entry (" + fm.failures()[p] + ", " + fm.failures()[s] +
                          ") names unknown mode '" + mode + "'");
    }
}

FailureMatrix load_model_matrix(const SystemModel& m, const std::string& model_path) {
  if (m.matrix_path.empty()) throw MatrixError("model '" + m.name + "' names no matrix file");
  std::filesystem::path p(m.matrix_path);
  if (p.is_relative()) p = std::filesystem::path(model_path).parent_path() / p;
  return FailureMatrix::load(p.string());
}

std::vector<FailureCase> enumerate_cases(const SystemModel& m, int max_order) {
  if (max_order != 1 && max_order != 2) throw std::invalid_argument("max_order must be 1 or 2");
  const int n = static_cast<int>(m.failures.size());
  std::vector<FailureCase> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(max_order == 2 ? n : 1));
  for (int i = 0; i < n; ++i) out.push_back(FailureCase{1, i, std::nullopt});
  if (max_order == 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) out.push_back(FailureCase{2, i, j});
  return out;
}

std::string target_mode(const FailureMatrix& fm, const SystemModel& m, const FailureCase& c) {
  const auto& a = m.failures.at(c.primary).name;
  return fm.at(a, c.secondary ? m.failures.at(*c.secondary).name : a);
}

std::string detect_expr(const SystemModel& m, int failure) {
  const Failure& f = m.failures.at(failure);
  if (!f.debounced()) return f.name;
  return "(" + f.name + ".t_debounce = DEBOUNCE)";
}

namespace {

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

std::vector<InstantiatedSpec> specs_for_case(const SystemModel& m, const FailureCase& c,
                                             const std::string& target,
                                             const std::vector<SpecTemplate>& library) {
  if (m.mode_index(target) < 0) throw MatrixError("target '" + target + "' is not a declared mode");
  const bool stop = target == kStopMode;
  const std::string d1 = detect_expr(m, c.primary);
  const std::string d2 = c.secondary ? detect_expr(m, *c.secondary) : d1;
  const std::string condition =
      c.secondary ? "((" + d1 + " | " + d2 + ") & !(" + d1 + " xor " + d2 + "))" : d1;

  std::vector<InstantiatedSpec> out;
  auto emit = [&](const SpecTemplate& t, std::string name, std::string failure) {
    std::string text = t.text;
    replace_all(text, "%DETECT1%", d1);
    replace_all(text, "%DETECT2%", d2);
    replace_all(text, "%DETECT%", d1);
    replace_all(text, "%CONDITION%", condition);
    replace_all(text, "%TARGET%", target);
    replace_all(text, "%FAILURE%", failure);
    try {
      Formula f = parse_formula(text, m);
      out.push_back(InstantiatedSpec{std::move(name), t.scope, text, std::move(f)});
    } catch (const ModelError& e) {
      throw ModelError("spec '" + t.name + "': " + e.what(), t.line, 1);
    }
  };

  for (const auto& t : library) {
    switch (t.scope) {
      case SpecScope::Always:
        emit(t, t.name, "");
        break;
      case SpecScope::Single:
        if (!c.secondary && !stop) emit(t, t.name, "");
        break;
      case SpecScope::Double:
        if (c.secondary && !stop) emit(t, t.name, "");
        break;
      case SpecScope::Stop:
        if (stop) emit(t, t.name, "");
        break;
      case SpecScope::Debounce:
        if (!c.secondary && m.failures[c.primary].debounced())
          emit(t, t.name, m.failures[c.primary].name);
        break;
    }
  }
  return out;
}

}  // namespace fov
