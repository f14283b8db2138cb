#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "slantcheck/builtins.hpp"
#include "slantcheck/errors.hpp"
#include "slantcheck/expr.hpp"
#include "slantcheck/report.hpp"
#include "slantcheck/runner.hpp"
#include "slantcheck/scenario.hpp"
#include "slantcheck/slant.hpp"
#include "slantcheck/version.hpp"

namespace py = pybind11;
using namespace slantcheck;

namespace {

// Immersion from component expressions over x1..xk, k = len(point).
Immersion immersion_from(const std::vector<std::string>& components,
                         std::size_t domain_dim) {
  std::vector<Expr> exprs;
  exprs.reserve(components.size());
  for (const std::string& c : components)
    exprs.push_back(Expr::parse(c, domain_dim));
  const std::size_t ambient = components.size();
  return Immersion{domain_dim, ambient,
                   [exprs](const JetVec& z) {
                     JetVec out;
                     out.reserve(exprs.size());
                     for (const Expr& e : exprs) out.push_back(e.eval(z));
                     return out;
                   }};
}

py::dict slant_report_py(const std::vector<std::string>& components,
                         const std::string& structure, const Vec& point) {
  const Mat j = preset_structure(structure);
  if (j.rows != components.size())
    throw ValidationError("structure '" + structure + "' acts on dimension " +
                          std::to_string(j.rows) + ", the immersion maps into " +
                          std::to_string(components.size()));
  const Immersion f = immersion_from(components, point.size());
  const SlantReport r = slant_at(f, point, TensorField11::constant(j),
                                 MetricSpec::euclidean(j.rows));
  py::dict d;
  d["eigenvalues"] = r.eigenvalues;
  d["spread"] = r.spread;
  d["lambda_mean"] = r.lambda_mean;
  d["classification"] = std::string(to_string(r.classification));
  if (r.theta)
    d["theta"] = *r.theta;
  else
    d["theta"] = py::none();
  d["tangential_form_max"] = r.tangential_form_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical verification of pointwise slant submanifold geometry";
  m.attr("__version__") = kEngineVersion;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def(
      "builtin_names", [] { return builtin_names(); },
      "Names of the bundled example scenarios.");
  m.def(
      "check_kinds", [] { return known_check_kinds(); },
      "Check kinds a scenario may declare.");
  m.def(
      "eval_expr",
      [](const std::string& text, const Vec& variables) {
        return Expr::parse(text, variables.size()).eval(variables);
      },
      py::arg("text"), py::arg("variables"),
      "Evaluate an expression over x1..xN at the given values.");
  m.def(
      "run_example",
      [](const std::string& name) { return emit_machine(run_builtin(name)); },
      py::arg("name"),
      "Run a bundled example; returns the machine-format report line.");
  m.def(
      "run_scenario_text",
      [](const std::string& text, const std::string& name) {
        return emit_machine(run_scenario(parse_scenario(text, name)));
      },
      py::arg("text"), py::arg("name") = std::string("scenario"),
      "Run scenario text; returns the machine-format report line.");
  m.def(
      "run_scenario_file",
      [](const std::string& path) {
        return emit_machine(run_scenario(load_scenario(path)));
      },
      py::arg("path"),
      "Run a scenario file; returns the machine-format report line.");
  m.def("slant_report", &slant_report_py, py::arg("components"),
        py::arg("structure"), py::arg("point"),
        "Pointwise slant data of an immersion given by component "
        "expressions, under a preset structure, at a parameter point.");
}
