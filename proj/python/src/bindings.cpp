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

// Python bindings. Results cross the boundary as JSON text and are decoded
// by the package's __init__.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fov/catalog.hpp"
#include "fov/executor.hpp"
#include "fov/ltl.hpp"
#include "fov/model.hpp"
#include "fov/qualification.hpp"
#include "fov/verifier.hpp"

#include <json.hpp>

namespace py = pybind11;
using nlohmann::json;

namespace {

struct Project {
  fov::SystemModel model;
  fov::FailureMatrix matrix;
  std::vector<fov::SpecTemplate> library;
  fov::VerifyConfig cfg;

  Project(const std::string& model_path, const std::string& specs_path, const std::optional<std::string>& matrix_path,
          std::optional<int> horizon, std::optional<int> max_depth) {
    model = fov::load_model(model_path);
    matrix = matrix_path ? fov::FailureMatrix::load(*matrix_path) : fov::load_model_matrix(model, model_path);
    fov::check_matrix(matrix, model);
    library = fov::load_spec_library(specs_path);
    cfg = fov::VerifyConfig::from(model.timing);
    if (horizon) cfg.timing.horizon = *horizon;
    if (max_depth) cfg.timing.max_depth = *max_depth;
    cfg.check();
  }

  std::vector<std::string> cases(int order) const {
    std::vector<std::string> ids;
    for (const auto& c : fov::enumerate_cases(model, order)) ids.push_back(c.id(model));
    return ids;
  }

  std::string check(const std::string& id, const std::optional<std::string>& phasing) const {
    fov::VerifyConfig c = cfg;
    if (phasing) c.phasings = {fov::parse_phasing(*phasing)};
    const auto cs = fov::prepare_case(model, matrix, library, fov::parse_case_id(id, model));
    py::gil_scoped_release release;
    fov::SweepReport r;
    r.results.push_back(fov::verify_case(model, cs, c));
    json j = json::parse(fov::report_json(model, r))["results"][0];
    const auto& res = r.results[0];
    if (res.trace) j["trace"] = json::parse(fov::dump_trace_json(model, *res.trace));
    return j.dump();
  }

  std::string sweep(const std::vector<std::string>& ids, int workers) const {
    std::vector<fov::FailureCase> cs;
    for (const auto& id : ids) cs.push_back(fov::parse_case_id(id, model));
    py::gil_scoped_release release;
    return fov::report_json(model, fov::verify_sweep(model, matrix, library, cs, cfg, workers));
  }

  std::string trace(const std::string& id, const std::string& phasing, int t1, std::optional<int> t2) const {
    const fov::FailureCase c = fov::parse_case_id(id, model);
    fov::ScenarioRef ref{fov::parse_phasing(phasing), t1, std::nullopt};
    if (c.secondary) ref.t2 = t2.value_or(t1);
    const auto sc = fov::make_scenario(model, c, ref, cfg.timing);
    return fov::dump_trace_json(model, fov::simulate(model, sc, cfg.timing.max_depth));
  }

  std::string validate(int workers) const {
    py::gil_scoped_release release;
    return fov::qualification_json(fov::run_spec_validation(model, matrix, library, cfg, workers));
  }

  std::string qualify(const std::string& suite_path, int workers) const {
    const auto suite = fov::load_suite(suite_path);
    py::gil_scoped_release release;
    return fov::qualification_json(fov::run_qualification(model, matrix, library, suite, cfg, workers));
  }

  bool holds(const std::string& formula, const std::string& id, const std::string& phasing, int t1,
             std::optional<int> t2) const {
    const fov::Formula f = fov::parse_formula(formula, model);
    const fov::FailureCase c = fov::parse_case_id(id, model);
    fov::ScenarioRef ref{fov::parse_phasing(phasing), t1, std::nullopt};
    if (c.secondary) ref.t2 = t2.value_or(t1);
    const auto t = fov::require_stationary(model, fov::make_scenario(model, c, ref, cfg.timing), cfg.timing.max_depth);
    return fov::evaluate(f, model, t).holds;
  }
};

}  // namespace

PYBIND11_MODULE(_fov, mod) {
  mod.doc() = "Bounded verifier for fail-operational arbitration logic";

  static py::exception<fov::ModelError> model_error(mod, "ModelError", PyExc_ValueError);
  static py::exception<fov::MatrixError> matrix_error(mod, "MatrixError", PyExc_ValueError);
  static py::exception<fov::ConfigError> config_error(mod, "ConfigError", PyExc_ValueError);
  static py::exception<fov::MutationError> mutation_error(mod, "MutationError", PyExc_ValueError);
  static py::exception<fov::NoStationaryState> engine_error(mod, "NoStationaryState", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const fov::ModelError& e) {
      py::set_error(model_error, e.what());
    } catch (const fov::MatrixError& e) {
      py::set_error(matrix_error, e.what());
    } catch (const fov::ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const fov::MutationError& e) {
      py::set_error(mutation_error, e.what());
    } catch (const fov::NoStationaryState& e) {
      py::set_error(engine_error, e.what());
    }
  });

  py::class_<Project>(mod, "Project")
      .def(py::init<const std::string&, const std::string&, const std::optional<std::string>&, std::optional<int>,
                    std::optional<int>>(),
           py::arg("model"), py::arg("specs"), py::arg("matrix") = std::nullopt, py::arg("horizon") = std::nullopt,
           py::arg("max_depth") = std::nullopt)
      .def("cases", &Project::cases, py::arg("order") = 1)
      .def("check_json", &Project::check, py::arg("case"), py::arg("phasing") = std::nullopt)
      .def("sweep_json", &Project::sweep, py::arg("cases"), py::arg("workers") = 1)
      .def("trace_json", &Project::trace, py::arg("case"), py::arg("phasing") = "late", py::arg("t1") = 0,
           py::arg("t2") = std::nullopt)
      .def("validate_json", &Project::validate, py::arg("workers") = 1)
      .def("qualify_json", &Project::qualify, py::arg("suite"), py::arg("workers") = 1)
      .def("holds", &Project::holds, py::arg("formula"), py::arg("case"), py::arg("phasing") = "late",
           py::arg("t1") = 0, py::arg("t2") = std::nullopt)
      .def_property_readonly("failures", [](const Project& p) { return fov::failure_catalog(p.model); })
      .def_property_readonly("horizon", [](const Project& p) { return p.cfg.timing.horizon; });

  mod.def("print_model", [](const std::string& path) { return fov::print_model(fov::load_model(path)); },
          py::arg("path"), "Canonical text of a model file.");
}
