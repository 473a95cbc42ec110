#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psn/asymptotics.hpp"
#include "psn/cli.hpp"
#include "psn/config.hpp"
#include "psn/io.hpp"
#include "psn/log.hpp"
#include "psn/report.hpp"

namespace py = pybind11;
using namespace psn;

namespace {

py::array_t<double> real_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<cplx> field_array(const ComplexField2D& u) {
  const py::ssize_t n = u.grid().n;
  py::array_t<cplx> out({n, n});
  std::copy(u.values().begin(), u.values().end(), out.mutable_data());
  return out;
}

ComplexField2D field_from(py::array_t<cplx, py::array::c_style | py::array::forcecast> a,
                          double half_width) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1))
    throw std::invalid_argument("field must be a square 2-D array");
  const Grid2D g = make_grid(static_cast<int>(a.shape(0)), half_width);
  return ComplexField2D(g, ComplexSamples(a.data(), a.data() + a.size()));
}

// JSON text from the library's own emitter, parsed by Python's json module.
py::object as_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(dump_json(j));
}

const RadialProfile& cached_profile() {
  static const RadialProfile p = solve_radial_ground_state();
  return p;
}

PotentialSpec harmonic(double lam, double omega) { return harmonic_potential(lam, omega); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planar rotating Schrodinger-Newton minimization lab";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FieldFileError>(m, "FieldFileError", PyExc_IOError);

  m.def("set_quiet", &set_quiet, py::arg("quiet"));

  py::class_<RadialProfile>(m, "RadialProfile")
      .def_property_readonly("r", [](const RadialProfile& p) { return real_array(p.r); })
      .def_property_readonly("q", [](const RadialProfile& p) { return real_array(p.q); })
      .def_property_readonly("dq", [](const RadialProfile& p) { return real_array(p.dq); })
      .def_readonly("q0", &RadialProfile::q0)
      .def_readonly("a_star", &RadialProfile::a_star)
      .def_readonly("ode_residual", &RadialProfile::ode_residual)
      .def("value", &RadialProfile::value, py::arg("rho"))
      .def("summary", [](const RadialProfile& p) { return as_python(ground_state_summary(p)); });

  m.def(
      "ground_state",
      [](double tol, double r_max) { return solve_radial_ground_state(tol, r_max); },
      py::arg("tol") = 1e-10, py::arg("r_max") = 20.0,
      "Radial ground state by shooting; its mass is the critical mass.");

  m.def(
      "gn_quotient",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> u, double half_width) {
        if (u.ndim() != 2 || u.shape(0) != u.shape(1))
          throw std::invalid_argument("field must be a square 2-D array");
        const Grid2D g = make_grid(static_cast<int>(u.shape(0)), half_width);
        return gn_quotient(g, std::span<const double>(u.data(), u.size()));
      },
      py::arg("u"), py::arg("half_width"));

  m.def(
      "grid_critical_mass",
      [](int n, double half_width) {
        const auto r = minimize_gn_quotient(make_grid(n, half_width));
        return py::make_tuple(r.quotient, r.converged);
      },
      py::arg("n") = 256, py::arg("half_width") = 16.0);

  m.def("energy_constant", [] { return energy_constant(cached_profile()); });

  m.def(
      "trial_bound",
      [](double a, double tau, double lam, double omega) {
        const auto& p = cached_profile();
        if (tau <= 0.0) tau = optimal_trial_scale(a, p.a_star);
        return trial_bound_closed_form(a, tau, p, harmonic(lam, omega));
      },
      py::arg("a"), py::arg("tau") = 0.0, py::arg("lam") = 2.0, py::arg("omega") = 1.0,
      "Closed-form trial energy in a harmonic trap; tau <= 0 uses the optimal scale.");

  m.def(
      "minimize",
      [](double a, int n, double half_width, double lam, double omega, double residual_tol,
         bool soliton_start, bool interactions) {
        const auto& p = cached_profile();
        MinimizeConfig cfg;
        cfg.residual_tol = residual_tol;
        if (soliton_start) cfg.init.kind = InitKind::kScaledSoliton;
        if (!interactions) cfg.interactions = {0.0, 0.0};
        const LogKernelPlan plan(make_grid(n, half_width));
        MinimizeResult r;
        {
          py::gil_scoped_release release;
          r = minimize(cfg, harmonic(lam, omega), a, plan, p);
        }
        return py::make_tuple(as_python(to_json(r.report)), field_array(r.field));
      },
      py::arg("a"), py::arg("n") = 128, py::arg("half_width") = 8.0, py::arg("lam") = 2.0,
      py::arg("omega") = 1.0, py::arg("residual_tol") = 1e-6, py::arg("soliton_start") = true,
      py::arg("interactions") = true,
      "Constrained minimizer in a harmonic trap; returns (report, field).");

  m.def(
      "energy",
      [](py::array_t<cplx, py::array::c_style | py::array::forcecast> field, double half_width,
         double lam, double omega) {
        const ComplexField2D u = field_from(field, half_width);
        const LogKernelPlan plan(u.grid());
        return as_python(to_json(energy_breakdown(u, harmonic(lam, omega), plan)));
      },
      py::arg("field"), py::arg("half_width"), py::arg("lam") = 2.0, py::arg("omega") = 1.0);

  m.def(
      "save_field",
      [](const std::string& path, py::array_t<cplx, py::array::c_style | py::array::forcecast> f,
         double half_width, double a, double omega) {
        save_field(path, field_from(f, half_width), {a, omega});
      },
      py::arg("path"), py::arg("field"), py::arg("half_width"), py::arg("a"), py::arg("omega"));

  m.def(
      "load_field",
      [](const std::string& path) {
        const auto r = load_field(path);
        return py::make_tuple(field_array(r.field), r.field.grid().half_width, r.meta.a,
                              r.meta.omega);
      },
      py::arg("path"), "Returns (field, half_width, a, omega).");

  m.def(
      "run",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "psn");
        std::vector<const char*> argv;
        for (const auto& s : args) argv.push_back(s.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a psn subcommand; returns (exit_code, stdout, stderr).");
}
