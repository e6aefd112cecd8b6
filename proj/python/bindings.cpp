#include <optional>
#include <string>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "axioquad/asymptotics.hpp"
#include "axioquad/cli.hpp"
#include "axioquad/darboux.hpp"
#include "axioquad/geometry.hpp"
#include "axioquad/integral.hpp"
#include "axioquad/json.hpp"

namespace py = pybind11;
using namespace axioquad;

namespace {

// Results cross as plain dicts, through the same JSON the CLI prints.
py::object to_py(const Json& j) {
  // leaked on purpose: destroying it after the interpreter is gone crashes
  static py::object* loads = new py::object(py::module_::import("json").attr("loads"));
  return (*loads)(dump(j, -1));
}

Function make(const std::string& f, double a, double b, const std::optional<std::string>& df,
              const std::optional<std::string>& F) {
  std::optional<std::string_view> d, anti;
  if (df) d = *df;
  if (F) anti = *F;
  return Function::from_source(f, {std::min(a, b), std::max(a, b)}, d, anti);
}

HSchedule schedule(std::optional<double> h0, std::optional<double> ratio, std::optional<int> count,
                   const std::string& side) {
  HSchedule s;
  if (h0) s.h0 = *h0;
  if (ratio) s.ratio = *ratio;
  if (count) s.count = *count;
  if (side == "positive") s.side = Side::positive;
  else if (side == "negative") s.side = Side::negative;
  else if (side != "both") throw PreconditionError("side must be positive, negative or both");
  return s;
}

ScalarFn wrap(const py::function& g) {
  return [g](double h) { return g(h).cast<double>(); };
}

}  // namespace

PYBIND11_MODULE(_axioquad, m) {
  static auto* error = new py::exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(*error)(py::str(e.what()));
      inst.attr("kind") = std::string(e.kind());
      PyErr_SetObject(error->ptr(), inst.ptr());
    }
  });

  m.attr("__version__") = cli::kVersion;

  m.def(
      "integrate",
      [](const std::string& f, double a, double b, double eps, std::optional<std::string> F) {
        return to_py(to_json(integrate(make(f, a, b, std::nullopt, F), a, b, eps)));
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("eps") = kDefaultEps, py::arg("F") = py::none());

  m.def(
      "darboux",
      [](const std::string& f, double a, double b, double eps) {
        return to_py(to_json(darboux_integral(make(f, a, b, std::nullopt, std::nullopt), a, b, eps)));
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("eps") = kDefaultEps);

  m.def(
      "uniqueness_crosscheck",
      [](const std::string& f, const std::string& F, double a, double b, double eps) {
        return to_py(to_json(uniqueness_crosscheck(make(f, a, b, std::nullopt, F), a, b, eps)));
      },
      py::arg("f"), py::arg("F"), py::arg("a"), py::arg("b"), py::arg("eps") = kDefaultEps);

  m.def(
      "area",
      [](const std::string& f, double a, double b, double eps) {
        return to_py(to_json(area_under_curve(make(f, a, b, std::nullopt, std::nullopt), a, b, eps)));
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("eps") = kDefaultEps);
  m.def(
      "arclength",
      [](const std::string& f, double a, double b, double eps, std::optional<std::string> df) {
        return to_py(to_json(arclength(make(f, a, b, df, std::nullopt), a, b, eps)));
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("eps") = kDefaultEps, py::arg("df") = py::none());
  m.def(
      "volume",
      [](const std::string& f, double a, double b, double eps) {
        return to_py(to_json(volume_of_revolution_shells(make(f, a, b, std::nullopt, std::nullopt), a, b, eps)));
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("eps") = kDefaultEps);

  m.def(
      "estimate_limit",
      [](const py::function& g, std::optional<double> h0, std::optional<double> ratio, std::optional<int> count,
         const std::string& side, double tol) {
        return to_py(to_json(estimate_limit(wrap(g), schedule(h0, ratio, count, side), tol)));
      },
      py::arg("g"), py::arg("h0") = py::none(), py::arg("ratio") = py::none(), py::arg("count") = py::none(),
      py::arg("side") = "both", py::arg("tol") = kDefaultLimitTol);
  m.def(
      "fit_order",
      [](const py::function& g, std::optional<double> h0, std::optional<double> ratio, std::optional<int> count,
         const std::string& side) { return to_py(to_json(fit_order(wrap(g), schedule(h0, ratio, count, side)))); },
      py::arg("g"), py::arg("h0") = py::none(), py::arg("ratio") = py::none(), py::arg("count") = py::none(),
      py::arg("side") = "both");
  m.def(
      "is_little_o",
      [](const py::function& g, int n, std::optional<double> h0, std::optional<double> ratio,
         std::optional<int> count, const std::string& side, double tol) {
        return to_py(to_json(is_little_o(wrap(g), n, schedule(h0, ratio, count, side), tol)));
      },
      py::arg("g"), py::arg("n"), py::arg("h0") = py::none(), py::arg("ratio") = py::none(),
      py::arg("count") = py::none(), py::arg("side") = "both", py::arg("tol") = kDefaultLimitTol);

  m.def(
      "verify_additivity",
      [](const py::function& I, double a, double b, int trials, std::optional<std::uint64_t> seed, double tol) {
        CandidateIntegral c;
        c.eval = [I](double x, double y) { return I(x, y).cast<double>(); };
        c.domain = {std::min(a, b), std::max(a, b)};
        c.description = "python callable";
        return to_py(to_json(verify_additivity(c, a, b, trials, seed.value_or(cli::default_seed()), tol)));
      },
      py::arg("I"), py::arg("a"), py::arg("b"), py::arg("trials") = 200, py::arg("seed") = py::none(),
      py::arg("tol") = 1e-9);
  m.def(
      "verify_asymptotic",
      [](const py::function& I, const std::string& rho, double a, double b, std::vector<double> points,
         double tol) {
        CandidateIntegral c;
        c.eval = [I](double x, double y) { return I(x, y).cast<double>(); };
        c.domain = {std::min(a, b), std::max(a, b)};
        c.description = "python callable";
        return to_py(
            to_json(verify_asymptotic(c, make(rho, a, b, std::nullopt, std::nullopt), points, {}, tol)));
      },
      py::arg("I"), py::arg("rho"), py::arg("a"), py::arg("b"), py::arg("points"), py::arg("tol") = kDefaultLimitTol);
}
