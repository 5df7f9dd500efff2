#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "nbarrier/barrier.hpp"
#include "nbarrier/errors.hpp"
#include "nbarrier/io.hpp"
#include "nbarrier/model.hpp"
#include "nbarrier/nonexistence.hpp"
#include "nbarrier/tangent.hpp"
#include "nbarrier/verify.hpp"
#include "nbarrier/waves.hpp"

namespace py = pybind11;
using namespace nbarrier;

namespace {

// Reports are built with the same JSON serializers as the CLI, then handed
// to Python as plain dicts and lists.
py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(to_py(v));
      return std::move(l);
    }
    case json::value_t::object: {
      py::dict d;
      for (auto it = j.begin(); it != j.end(); ++it) d[py::str(it.key())] = to_py(it.value());
      return std::move(d);
    }
    default:
      throw std::runtime_error("unsupported JSON value");
  }
}

TwoSpeciesParams params(double alpha, double beta, double d, double k, double a1, double a2) {
  TwoSpeciesParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.d = d;
  p.k = k;
  p.a1 = a1;
  p.a2 = a2;
  p.validate();
  return p;
}

Composition rule_of(const std::string& r) {
  if (r == "diffusion_scaled") return Composition::diffusion_scaled;
  if (r == "reweighted") return Composition::reweighted;
  throw ValidationError("rule must be diffusion_scaled or reweighted");
}

DiffusionRange range_of(const std::string& r) {
  if (r == "all") return DiffusionRange::all_four;
  if (r == "first3") return DiffusionRange::first_three;
  throw ValidationError("d_range must be all or first3");
}

py::dict profile_dict(const WaveProfile& p) {
  py::dict d;
  d["x"] = p.x;
  d["values"] = p.values;
  d["theta"] = p.theta;
  d["residual_norm"] = p.residual_norm;
  d["e_minus"] = p.e_minus;
  d["e_plus"] = p.e_plus;
  return d;
}

WaveProfile profile_from(const Eigen::VectorXd& x, const Eigen::MatrixXd& values, double theta) {
  if (values.cols() != x.size()) throw DimensionError("values must have one column per x");
  WaveProfile p;
  p.x = x;
  p.values = values;
  p.theta = theta;
  p.e_minus = values.col(0);
  p.e_plus = values.col(values.cols() - 1);
  return p;
}

#define NB_PARAMS                                                                      \
  py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("d") = 1.0, py::arg("k") = 1.0, \
      py::arg("a1") = 2.0, py::arg("a2") = 2.0

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "N-barrier bounds and traveling waves for Lotka-Volterra systems";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<ConvergenceError> convergence(m, "ConvergenceError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(validation.ptr(), e.what());
    } catch (const ConvergenceError& e) {
      PyErr_SetString(convergence.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  py::class_<LVSystem>(m, "LVSystem")
      .def(py::init([](const Eigen::VectorXd& d, const Eigen::VectorXd& sigma,
                       const Eigen::MatrixXd& c, std::optional<Eigen::VectorXd> mexp,
                       double theta) {
             return mexp ? LVSystem(d, sigma, c, *mexp, theta) : LVSystem(d, sigma, c, theta);
           }),
           py::arg("d"), py::arg("sigma"), py::arg("c"), py::arg("m") = py::none(),
           py::arg("theta") = 0.0)
      .def_property_readonly("n", &LVSystem::n)
      .def_property_readonly("d", &LVSystem::d)
      .def_property_readonly("sigma", &LVSystem::sigma)
      .def_property_readonly("c", &LVSystem::c)
      .def_property_readonly("m", &LVSystem::m)
      .def_property_readonly("theta", &LVSystem::theta)
      .def("with_theta", &LVSystem::with_theta, py::arg("theta"))
      .def("kinetics", [](const LVSystem& s, const Eigen::VectorXd& u) {
        return evaluate_kinetics(s, DensityVector(u));
      });

  m.def("load_system", &load_system, py::arg("path"));

  m.def("enumerate_equilibria", [](const LVSystem& s) { return to_py(json(enumerate_equilibria(s))); });

  m.def("lv_box", [](const LVSystem& s) { return to_py(json(lv_box(s))); });

  m.def(
      "check_hypothesis",
      [](const LVSystem& s, int samples, std::uint64_t seed) {
        return to_py(json(check_hypothesis_H(s, lv_box(s), samples, seed)));
      },
      py::arg("sys"), py::arg("samples"), py::arg("seed"));

  m.def(
      "nbmp_bounds",
      [](const LVSystem& s, const Eigen::VectorXd& alpha, int chi_value) {
        return to_py(json(nbmp_bounds(lv_box(s), s.d(), alpha, chi_value)));
      },
      py::arg("sys"), py::arg("alpha"), py::arg("chi") = 1);

  m.def(
      "barriers",
      [](const LVSystem& s, const Eigen::VectorXd& alpha) {
        const HypothesisBox box = lv_box(s);
        json j{{"lower", lower_barrier(box, s.d(), alpha)},
               {"upper", upper_barrier(box, s.d(), alpha)}};
        return to_py(j);
      },
      py::arg("sys"), py::arg("alpha"));

  m.def(
      "tangent_lambda2",
      [](double alpha, double beta, double d, double k, double a1, double a2) {
        return to_py(json(tangent_lambda2(params(alpha, beta, d, k, a1, a2))));
      },
      NB_PARAMS);

  m.def(
      "compare_bounds",
      [](double alpha, double beta, double d, double k, double a1, double a2,
         const std::string& rule) {
        return to_py(json(compare_bounds(params(alpha, beta, d, k, a1, a2), rule_of(rule))));
      },
      NB_PARAMS, py::arg("rule") = "diffusion_scaled");

  m.def(
      "containment_sup",
      [](double alpha, double beta, double d, double k, double a1, double a2, int samples,
         std::uint64_t seed) {
        return containment_sup(params(alpha, beta, d, k, a1, a2), samples, seed);
      },
      NB_PARAMS, py::arg("samples"), py::arg("seed"));

  m.def(
      "check_nonexistence",
      [](const LVSystem& s, std::optional<double> sigma4, const std::string& d_range) {
        const DiffusionRange r = range_of(d_range);
        return to_py(json(sigma4 ? certificate_at(s, *sigma4, r) : check_nonexistence(s, r)));
      },
      py::arg("sys"), py::arg("sigma4") = py::none(), py::arg("d_range") = "all");

  m.def(
      "sigma4_threshold",
      [](const LVSystem& s, const std::string& d_range) {
        return sigma4_threshold(s, range_of(d_range));
      },
      py::arg("sys"), py::arg("d_range") = "all");

  m.def(
      "solve_wave",
      [](const LVSystem& s, const Eigen::VectorXd& e_minus, const Eigen::VectorXd& e_plus,
         double L, double h, double width, double newton_tol, int max_iters,
         int continuation) {
        SolverConfig cfg;
        cfg.newton_tol = newton_tol;
        cfg.max_iters = max_iters;
        cfg.continuation_steps = continuation;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve_wave(s, e_minus, e_plus, Grid(L, h), cfg, width);
        }
        py::dict d = profile_dict(r.profile);
        d["diagnostics"] = to_py(json(r.diagnostics));
        return d;
      },
      py::arg("sys"), py::arg("e_minus"), py::arg("e_plus"), py::arg("L") = 40.0,
      py::arg("h") = 0.05, py::arg("width") = 1.0, py::arg("newton_tol") = 1e-10,
      py::arg("max_iters") = 50, py::arg("continuation") = 1);

  m.def(
      "residual",
      [](const LVSystem& s, const Eigen::VectorXd& x, const Eigen::MatrixXd& values) {
        return residual(s, profile_from(x, values, s.theta())).max_abs;
      },
      py::arg("sys"), py::arg("x"), py::arg("values"));

  m.def(
      "verify_bounds",
      [](const LVSystem& s, const Eigen::VectorXd& x, const Eigen::MatrixXd& values,
         const Eigen::VectorXd& alpha, std::optional<double> tol, double chi_tol) {
        const WaveProfile p = profile_from(x, values, s.theta());
        const Bounds b =
            nbmp_bounds(lv_box(s), s.d(), alpha, chi(p.e_minus, p.e_plus, chi_tol));
        const double h = p.spacing();
        return to_py(json(verify_bounds(p, alpha, b, tol ? *tol : 10.0 * h * h)));
      },
      py::arg("sys"), py::arg("x"), py::arg("values"), py::arg("alpha"),
      py::arg("tol") = py::none(), py::arg("chi_tol") = 1e-9);
}
