#include "causticlab/fold.hpp"
#include "causticlab/runner.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
namespace cl = causticlab;

namespace {

py::tuple rational(const cl::Rational& q) { return py::make_tuple(q.numerator(), q.denominator()); }

cl::IntegralResult integral(const std::string& type, const std::vector<double>& x, double h, const std::string& kind,
                            double delta, double rel_tol, bool includes_prefactor) {
  cl::IntegralSpec spec(cl::build_phase(cl::parse_singularity(type)),
                        cl::make_amplitude(cl::parse_amplitude_kind(kind), delta), x, h);
  spec.rel_tol = rel_tol;
  spec.includes_prefactor = includes_prefactor;
  return cl::evaluate(spec);
}

py::dict criterion_dict(const cl::CriterionResult& c) {
  py::dict d;
  d["id"] = c.id;
  d["name"] = c.name;
  d["status"] = cl::to_string(c.status);
  d["detail"] = c.detail;
  d["seconds"] = c.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sup-norm experiments for Lagrangian distributions near caustics";

  py::register_exception<cl::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("catalog_types", [] {
    std::vector<std::string> out;
    for (const auto& t : cl::catalog_types()) out.push_back(t.label());
    return out;
  });
  m.def("caustic_order", [](const std::string& t) { return rational(cl::caustic_order(cl::parse_singularity(t))); },
        "Exact caustic order kappa as (numerator, denominator).", py::arg("type"));
  m.def("threshold", [](const std::string& t) { return rational(cl::threshold(cl::parse_singularity(t))); },
        "Exact regularity threshold as (numerator, denominator).", py::arg("type"));
  m.def("catalog_csv", &cl::catalog_csv);
  m.def(
      "phase",
      [](const std::string& t, const std::vector<double>& x, const std::vector<double>& theta) {
        return cl::build_phase(cl::parse_singularity(t))(x, theta);
      },
      py::arg("type"), py::arg("x"), py::arg("theta"));

  py::class_<cl::IntegralResult>(m, "IntegralResult")
      .def_readonly("value", &cl::IntegralResult::value)
      .def_readonly("abs_value", &cl::IntegralResult::abs_value)
      .def_readonly("est_error", &cl::IntegralResult::est_error)
      .def_readonly("evaluations", &cl::IntegralResult::evaluations)
      .def_readonly("levels", &cl::IntegralResult::levels)
      .def_readonly("converged", &cl::IntegralResult::converged);
  m.def("integral", &integral, "I(x; h) for a catalog phase and a built-in amplitude.", py::arg("type"), py::arg("x"),
        py::arg("h"), py::arg("amplitude") = "fixed_bump", py::arg("delta") = 0.0, py::arg("rel_tol") = 1e-8,
        py::arg("includes_prefactor") = true);

  m.def("m_alpha", &cl::m_alpha, py::arg("alpha"));
  m.def("weighted_cauchy", &cl::weighted_cauchy, py::arg("x"), py::arg("eps"));
  m.def("cauchy_square", &cl::cauchy_square, py::arg("x"), py::arg("eps"));
  m.def("sharp_exponent", &cl::sharp_exponent, py::arg("delta"));

  m.def(
      "ball_count", [](const std::vector<double>& center, double radius) { return cl::ball_count(center, radius); },
      py::arg("center"), py::arg("radius"));
  m.def(
      "sphere_cap_count",
      [](int n, std::int64_t j, std::vector<double> omega, double mu, double cap_constant) {
        cl::CapQuery q;
        q.n = n;
        q.j = j;
        q.omega = omega.empty() ? cl::omega_preset(n, cl::ExtremizerMode::sphere) : std::move(omega);
        q.mu = mu;
        q.cap_constant = cap_constant;
        return cl::sphere_cap_count(q);
      },
      py::arg("n"), py::arg("j"), py::arg("omega") = std::vector<double>{}, py::arg("mu") = 0.5,
      py::arg("cap_constant") = 1.0);
  m.def("sum_of_squares_count", &cl::sum_of_squares_count, py::arg("n"), py::arg("j"));

  m.def(
      "execute",
      [](const std::string& config_json) {
        const auto config = cl::parse_config(config_json);
        cl::RunReport report;
        {
          py::gil_scoped_release release;
          report = cl::execute(config);
        }
        py::dict d;
        d["status"] = report.status;
        d["files"] = report.files;
        d["wall_seconds"] = report.wall_seconds;
        return d;
      },
      "Run an experiment from a JSON config; returns status and report files.", py::arg("config_json"));
  m.def(
      "normalize_config", [](const std::string& j) { return cl::config_to_json(cl::parse_config(j)); },
      "Parse, validate and echo a config in canonical form.", py::arg("config_json"));
  m.def(
      "verify_all",
      [](bool quick, std::vector<int> only, std::uint64_t seed, int workers) {
        cl::VerifyOptions o;
        o.quick = quick;
        o.only = std::move(only);
        o.seed = seed;
        o.workers = workers;
        cl::VerifySummary s;
        {
          py::gil_scoped_release release;
          s = cl::verify_all(o);
        }
        py::list out;
        for (const auto& c : s.criteria) out.append(criterion_dict(c));
        return out;
      },
      py::arg("quick") = false, py::arg("only") = std::vector<int>{}, py::arg("seed") = 0, py::arg("workers") = 1);
}
