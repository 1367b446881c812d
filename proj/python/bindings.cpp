#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riskrates/config.hpp"
#include "riskrates/errors.hpp"
#include "riskrates/experiments.hpp"
#include "riskrates/hedge.hpp"
#include "riskrates/oracle.hpp"
#include "riskrates/risk.hpp"

namespace py = pybind11;
using namespace riskrates;
using io::Json;

// Specs and configs cross the boundary as JSON text; the Python layer
// serializes dicts.

namespace {

ScenarioSet scenarios(std::vector<double> weights, std::vector<double> f,
                      const std::vector<std::vector<double>>& g) {
  if (g.size() != weights.size()) throw ParameterError("g needs one row per scenario");
  const std::size_t e = g.empty() ? 0 : g.front().size();
  std::vector<double> flat;
  flat.reserve(g.size() * e);
  for (const auto& row : g) {
    if (row.size() != e) throw ParameterError("g rows must have equal length");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ScenarioSet(std::move(weights), std::move(f), std::move(flat), e);
}

py::dict hedge_dict(const HedgeResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["g_star"] = r.g_star;
  d["certified"] = r.certified;
  return d;
}

std::vector<std::tuple<std::size_t, double, double>> rows(const RateCurve& c) {
  std::vector<std::tuple<std::size_t, double, double>> out;
  for (const auto& p : c.points) out.emplace_back(p.n, p.mean_error, p.std_error);
  return out;
}

ExperimentConfig experiment(const std::string& json) {
  return io::experiment_from_json(Json::parse(json));
}

}  // namespace

PYBIND11_MODULE(_riskrates, m) {
  m.doc() = "Plug-in estimation of risk measures and hedging values";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", error.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", error.ptr());
  py::register_exception<EmptyInputError>(m, "EmptyInputError", error.ptr());
  py::register_exception<ContractError>(m, "ContractError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<FiniteDiscrete>(m, "FiniteDiscrete")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("atoms"),
           py::arg("weights"))
      .def_property_readonly("atoms", &FiniteDiscrete::atoms)
      .def_property_readonly("weights", &FiniteDiscrete::weights)
      .def("mean", &FiniteDiscrete::mean)
      .def("__len__", &FiniteDiscrete::size)
      .def("__repr__", [](const FiniteDiscrete& d) { return describe(Distribution{d}); });

  m.def("empirical", [](const std::vector<double>& xs) { return FiniteDiscrete::from_sample(xs); },
        py::arg("values"));
  m.def(
      "sample",
      [](const std::string& dist, std::size_t n, std::uint64_t seed) {
        return sample(io::distribution_from_json(Json::parse(dist)), n, seed).values;
      },
      py::arg("dist_json"), py::arg("n"), py::arg("seed"));

  m.def("avar", &avar, py::arg("law"), py::arg("u"));
  m.def("sharpness_risk", &sharpness_risk, py::arg("law"), py::arg("eps"));
  m.def(
      "evaluate",
      [](const FiniteDiscrete& law, const std::string& spec, double tol) {
        return evaluate(law, io::risk_from_json(Json::parse(spec)), tol);
      },
      py::arg("law"), py::arg("spec_json"), py::arg("tol") = 1e-10);

  m.def(
      "hedged_risk",
      [](std::vector<double> w, std::vector<double> f, const std::vector<std::vector<double>>& g,
         const std::string& risk, const std::string& strategies, double tol) {
        return hedge_dict(hedged_risk(scenarios(std::move(w), std::move(f), g),
                                      io::risk_from_json(Json::parse(risk)),
                                      io::strategies_from_json(Json::parse(strategies)), tol));
      },
      py::arg("weights"), py::arg("f"), py::arg("g"), py::arg("risk_json"),
      py::arg("strategies_json"), py::arg("tol") = 1e-9);
  m.def(
      "utility_max",
      [](std::vector<double> w, std::vector<double> f, const std::vector<std::vector<double>>& g,
         const std::string& utility, const std::string& strategies, double tol) {
        return hedge_dict(utility_max(scenarios(std::move(w), std::move(f), g),
                                      io::utility_from_json(Json::parse(utility)),
                                      io::strategies_from_json(Json::parse(strategies)), tol));
      },
      py::arg("weights"), py::arg("f"), py::arg("g"), py::arg("utility_json"),
      py::arg("strategies_json"), py::arg("tol") = 1e-9);
  m.def(
      "unboundedness_probe",
      [](std::vector<double> w, std::vector<double> f, const std::vector<std::vector<double>>& g,
         const std::string& risk, const std::vector<double>& direction, double t_max,
         std::size_t steps) {
        const ProbeReport r = unboundedness_probe(scenarios(std::move(w), std::move(f), g),
                                                  io::risk_from_json(Json::parse(risk)),
                                                  direction, t_max, steps);
        return py::make_tuple(r.values, r.diverging);
      },
      py::arg("weights"), py::arg("f"), py::arg("g"), py::arg("risk_json"), py::arg("direction"),
      py::arg("t_max") = 1e4, py::arg("steps") = 9);

  m.def(
      "true_value",
      [](const std::string& config) {
        const TrueValue t = true_value(experiment(config));
        return py::make_tuple(t.value, t.approximate);
      },
      py::arg("config_json"));
  m.def(
      "mean_error_curve",
      [](const std::string& config) {
        py::gil_scoped_release release;
        return rows(mean_error_curve(experiment(config)));
      },
      py::arg("config_json"));
  m.def(
      "deviation_curve",
      [](const std::string& config) {
        DeviationCurve c;
        {
          py::gil_scoped_release release;
          c = deviation_curve(experiment(config));
        }
        std::vector<std::tuple<std::size_t, double, double, std::size_t>> out;
        for (const auto& p : c.points) out.emplace_back(p.n, p.epsilon, p.p_hat, p.replications);
        return out;
      },
      py::arg("config_json"));
  m.def(
      "bias_report",
      [](const std::string& config, std::size_t n) {
        BiasReport b;
        {
          py::gil_scoped_release release;
          b = bias_report(experiment(config), n);
        }
        return py::make_tuple(b.mean_signed_error, b.std_error);
      },
      py::arg("config_json"), py::arg("n"));
  m.def(
      "fit_rate",
      [](const std::vector<std::pair<std::size_t, double>>& points) {
        RateCurve c;
        for (const auto& [n, e] : points) c.points.push_back({n, e, 0.0});
        const RateFit f = fit_rate(c);
        return py::make_tuple(f.slope, f.intercept, f.r_squared);
      },
      py::arg("points"));
  m.def(
      "sharpness_curve",
      [](double eps, const std::vector<std::size_t>& grid, std::size_t reps, std::uint64_t seed) {
        py::gil_scoped_release release;
        return rows(sharpness_curve(eps, grid, reps, seed));
      },
      py::arg("eps"), py::arg("n_grid"), py::arg("replications"), py::arg("seed") = 0x5EED);

  auto o = m.def_submodule("oracle", "Closed-form reference values");
  o.def("avar_bernoulli", &oracle::avar_bernoulli, py::arg("p"), py::arg("u"));
  o.def("avar_pareto", &oracle::avar_pareto, py::arg("q"), py::arg("u"));
  o.def("sharpness_two_point", &oracle::sharpness_two_point, py::arg("a"), py::arg("eps"));
  o.def("binomial_two_sided_tail", &oracle::binomial_two_sided_tail, py::arg("n"), py::arg("p"),
        py::arg("eps"));
  o.def(
      "dyadic_sum", [](double a, double b, double x) { return oracle::dyadic_sum(a, b, x); },
      py::arg("a"), py::arg("b"), py::arg("x"));
}
