#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wfkdv/acceptance.hpp"
#include "wfkdv/characteristics.hpp"
#include "wfkdv/cli.hpp"
#include "wfkdv/config.hpp"
#include "wfkdv/detector.hpp"
#include "wfkdv/propagator.hpp"
#include "wfkdv/solver.hpp"
#include "wfkdv/wpt.hpp"

namespace py = pybind11;
using namespace wfkdv;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexField to_field(const Grid1D& grid, const CArray& a) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != grid.count())
    throw Error(ErrorCode::GridMismatch, "array length must equal the grid's node count");
  return ComplexField(grid, std::vector<Complex>(a.data(), a.data() + a.shape(0)));
}

template <class Span>
CArray to_array(const Span& s) {
  CArray out(static_cast<py::ssize_t>(s.size()));
  std::copy(s.begin(), s.end(), out.mutable_data());
  return out;
}

py::dict fit_dict(const DecayFit& f) {
  py::dict d;
  d["verdict"] = std::string(to_string(f.verdict));
  d["exponent"] = f.exponent;
  d["r2"] = f.r2;
  d["underflow"] = f.underflow;
  d["censored_at"] = f.censored_at;
  d["secant_bound"] = f.secant_bound;
  d["accelerating"] = f.accelerating;
  d["lambdas"] = f.lambdas;
  d["x_eval"] = f.x_eval;
  d["magnitudes"] = f.magnitudes;
  d["errors"] = f.floors;
  d["values"] = f.values;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wave packet transforms and wave front detection for linearized KdV";

  static py::exception<Error> error_type(m, "WfkdvError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Grid1D>(m, "Grid")
      .def(py::init<double, std::size_t>(), py::arg("half_length"), py::arg("count"))
      .def_property_readonly("half_length", &Grid1D::half_length)
      .def_property_readonly("count", &Grid1D::count)
      .def_property_readonly("spacing", &Grid1D::spacing)
      .def_property_readonly("nyquist", &Grid1D::nyquist)
      .def("nodes", &Grid1D::nodes)
      .def("frequencies", &Grid1D::frequencies)
      .def("__repr__", [](const Grid1D& g) {
        std::ostringstream os;
        os << "Grid(half_length=" << g.half_length() << ", count=" << g.count() << ")";
        return os.str();
      });

  m.def("to_spectral", [](const Grid1D& g, const CArray& f) { return to_array(to_spectral(to_field(g, f)).coefficients()); });
  m.def("to_physical", [](const Grid1D& g, const CArray& F) {
    if (F.ndim() != 1 || static_cast<std::size_t>(F.shape(0)) != g.count())
      throw Error(ErrorCode::GridMismatch, "array length must equal the grid's node count");
    return to_array(to_physical(SpectralField(g, std::vector<Complex>(F.data(), F.data() + F.shape(0)))).samples());
  });
  m.def("airy_propagate", [](const Grid1D& g, const CArray& u, double t) {
    return to_array(airy_propagate(to_field(g, u), t).samples());
  });
  m.def("window_evolve", [](const Grid1D& g, const CArray& phi, double t, double xi) {
    return to_array(window_evolve(to_field(g, phi), t, xi).samples());
  });
  m.def("l2_norm", [](const Grid1D& g, const CArray& u) { return l2_norm(to_field(g, u)); });

  py::class_<CoefficientModel>(m, "Coefficient")
      .def_static("zero", &CoefficientModel::zero, py::arg("rho") = 0.25)
      .def_static("soliton", &CoefficientModel::soliton, py::arg("amplitude"), py::arg("width"), py::arg("speed"),
                  py::arg("offset") = 0.0, py::arg("rho") = 0.25)
      .def_property_readonly("amplitude", &CoefficientModel::amplitude)
      .def_property_readonly("width", &CoefficientModel::width)
      .def_property_readonly("speed", &CoefficientModel::speed)
      .def("eval", &CoefficientModel::eval, py::arg("t"), py::arg("x"), py::arg("k") = 0)
      .def("far_field_radius", &CoefficientModel::far_field_radius);
  m.def("soliton_from_ratio", &soliton_from_ratio, py::arg("a_nl"), py::arg("gamma"), py::arg("width"),
        py::arg("offset") = 0.0, py::arg("rho") = 0.25);
  m.def("kdv_residual", &kdv_residual);

  m.def(
      "solve",
      [](const Grid1D& g, const CArray& u0, const CoefficientModel& coeff, double dt, double t_final,
         std::size_t stride) {
        SolveConfig cfg;
        cfg.grid = g;
        cfg.coefficient = coeff;
        cfg.dt = dt;
        cfg.t_final = t_final;
        cfg.record_stride = stride;
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = solve(to_field(g, u0), cfg);
        }
        py::array_t<Complex> snaps({static_cast<py::ssize_t>(tr.snapshots.size()), static_cast<py::ssize_t>(g.count())});
        auto view = snaps.mutable_unchecked<2>();
        for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
          for (std::size_t j = 0; j < g.count(); ++j) view(i, j) = tr.snapshots[i][j];
        py::dict d;
        d["times"] = tr.times;
        d["snapshots"] = snaps;
        d["l2"] = tr.l2_history;
        d["h3"] = tr.h3_history;
        d["boundary"] = tr.boundary_history;
        d["energy_residual"] = tr.energy_residual_history;
        d["steps"] = tr.steps;
        d["noise_level"] = tr.noise_level;
        return d;
      },
      py::arg("grid"), py::arg("u0"), py::arg("coefficient"), py::arg("dt") = 2e-4, py::arg("t_final") = 1.0,
      py::arg("stride") = 1000);

  m.def(
      "trace",
      [](double x0, double t0, double xi, double lambda, const CoefficientModel& coeff, std::vector<double> times) {
        CharSpec s;
        s.x0 = x0;
        s.t0 = t0;
        s.xi = xi;
        s.lambda = lambda;
        s.coefficient = coeff;
        const CharPath p = trace(s, times);
        py::dict d;
        d["times"] = p.times;
        d["positions"] = p.positions;
        d["x_at_zero"] = p.x_at_zero;
        d["error_estimate"] = p.error_estimate;
        return d;
      },
      py::arg("x0"), py::arg("t0"), py::arg("xi"), py::arg("lam"), py::arg("coefficient"),
      py::arg("times") = std::vector<double>{});
  m.def("escape_bound_lambda0", [](const CoefficientModel& c) { return escape_bound_check(EscapeBoundConfig{}, c).lambda0; });

  py::class_<DataSource>(m, "DataSource")
      .def_static("from_field",
                  [](const Grid1D& g, const CArray& f, double noise) { return DataSource::from_field(to_field(g, f), noise); },
                  py::arg("grid"), py::arg("samples"), py::arg("noise_level") = 0.0)
      .def("evolved", &DataSource::evolved)
      .def_property_readonly("is_field", &DataSource::is_field);
  m.def("gaussian_datum", &gaussian_datum);
  m.def("jump_gaussian_datum", &jump_gaussian_datum);
  m.def("backward_evolved_jump_datum", &backward_evolved_jump_datum);

  py::class_<WindowSpec>(m, "WindowSpec")
      .def(py::init([](const std::string& name, double d, double lambda) {
             return WindowSpec{window_by_name(name), d, lambda};
           }),
           py::arg("name") = "gaussian", py::arg("d") = 0.375, py::arg("lam") = 1.0)
      .def_readwrite("d", &WindowSpec::d)
      .def_readwrite("lam", &WindowSpec::lambda);

  m.def(
      "wpt",
      [](const DataSource& f, const WindowSpec& w, double x, double xi, bool spectral) {
        const PacketWindow pw = PacketWindow::scaled(w);
        const WptValue v = spectral ? forward_wpt_spectral(f, pw, x, xi) : forward_wpt(f, pw, x, xi);
        return py::make_tuple(v.value, v.error);
      },
      py::arg("data"), py::arg("window"), py::arg("x"), py::arg("xi"), py::arg("spectral") = false);

  py::class_<Thresholds>(m, "Thresholds")
      .def(py::init([](double n, double margin) { return Thresholds{n, margin}; }), py::arg("n_thr"), py::arg("margin"))
      .def_readwrite("n_thr", &Thresholds::n_thr)
      .def_readwrite("margin", &Thresholds::margin);
  m.def("geometric_lambdas", &geometric_lambdas);
  m.def(
      "calibrate",
      [](const std::string& window, double d) {
        return calibrate_threshold(window_by_name(window), d, geometric_lambdas(1, 64, 13)).thresholds;
      },
      py::arg("window") = "gaussian", py::arg("d") = 0.375);

  m.def(
      "detect",
      [](const DataSource& u0, const CoefficientModel& coeff, double t0, double x, double xi,
         const std::string& criterion, const Thresholds& thr, std::optional<DataSource> at_t0,
         const std::string& window, double d, std::vector<double> lambdas) {
        SweepConfig cfg;
        cfg.window = WindowSpec{window_by_name(window), d, 1.0};
        cfg.thresholds = thr;
        if (!lambdas.empty()) cfg.lambdas = std::move(lambdas);
        if (criterion != "evolved" && criterion != "initial")
          throw Error(ErrorCode::InvalidArgument, "criterion must be 'evolved' or 'initial'");
        const DetectorProblem problem{u0, std::move(at_t0), coeff, t0};
        return fit_dict(detect(problem, criterion == "evolved" ? Criterion::Evolved : Criterion::Initial, {x, xi}, cfg));
      },
      py::arg("data"), py::arg("coefficient"), py::arg("t0"), py::arg("x"), py::arg("xi"), py::arg("criterion"),
      py::arg("thresholds"), py::arg("at_t0") = py::none(), py::arg("window") = "gaussian", py::arg("d") = 0.375,
      py::arg("lambdas") = std::vector<double>{});

  m.def(
      "run_acceptance",
      [](std::vector<int> only) {
        AcceptanceOptions opts;
        opts.only = std::move(only);
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_acceptance(opts);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.pass;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{});

  m.def("config_digest", [](const std::string& text) { return config_digest(parse_config_text(text)); });
  m.def(
      "run_command",
      [](const std::string& cmd, const std::string& text) {
        std::ostringstream out, err;
        int code;
        try {
          code = run_command(cmd, parse_config_text(text), out, err);
        } catch (const Error& e) {
          err << "error: " << e.what() << '\n';
          code = kExitConfig;
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("subcommand"), py::arg("config_text") = "");
}
