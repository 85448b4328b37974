#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "fraclap/constants.hpp"
#include "fraclap/error.hpp"
#include "fraclap/field.hpp"
#include "fraclap/gl.hpp"
#include "fraclap/linear.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/potential.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/spectral.hpp"

namespace py = pybind11;
using namespace fraclap;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (nodes,) for scalars, (nodes, components) for vector fields; interleaved like Field.
Field to_field(const Grid& grid, const Array& a) {
  const py::buffer_info b = a.request();
  int comps = 1;
  if (b.ndim == 2) {
    comps = static_cast<int>(b.shape[1]);
  } else if (b.ndim != 1) {
    throw ValidationError("field arrays must be 1-D (scalar) or 2-D (nodes, components)");
  }
  if (static_cast<std::size_t>(b.shape[0]) != grid.node_count()) {
    throw ValidationError("array has " + std::to_string(b.shape[0]) + " rows, grid has " +
                          std::to_string(grid.node_count()) + " nodes");
  }
  const double* p = static_cast<const double*>(b.ptr);
  return Field(grid, comps, std::vector<double>(p, p + b.size));
}

Array to_array(const Field& f) {
  Array out = f.components() == 1 ? Array(static_cast<py::ssize_t>(f.node_count()))
                                   : Array({static_cast<py::ssize_t>(f.node_count()),
                                            static_cast<py::ssize_t>(f.components())});
  std::memcpy(out.mutable_data(), f.values().data(), f.values().size() * sizeof(double));
  return out;
}

ExteriorData exterior_from(const py::object& e) {
  if (py::isinstance<py::str>(e)) {
    const std::string s = e.cast<std::string>();
    if (s == "zero") return ExteriorData::zero();
    if (s == "periodic") return ExteriorData::periodic();
    throw ValidationError("exterior must be 'zero', 'periodic' or a number, got '" + s + "'");
  }
  return ExteriorData::constant(e.cast<double>());
}

py::dict report_dict(const PropertyReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["worst_violation"] = r.worst_violation;
  d["violation_node"] = r.violation_node ? py::cast(*r.violation_node) : py::none();
  d["tolerance"] = r.tolerance;
  d["context"] = r.context;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fractional Laplacian operators, Ginzburg-Landau flow and property checks";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Grid>(m, "Grid")
      .def(py::init([](int dim, double half_extent, int n, const std::string& topology) {
             return Grid(dim, half_extent, n, topology_from_string(topology.c_str()));
           }),
           py::arg("dim"), py::arg("half_extent"), py::arg("points_per_axis"), py::arg("topology") = "periodic")
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("half_extent", &Grid::half_extent)
      .def_property_readonly("points_per_axis", &Grid::points_per_axis)
      .def_property_readonly("topology", [](const Grid& g) { return std::string(to_string(g.topology())); })
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("node_count", &Grid::node_count)
      .def("coordinates",
           [](const Grid& g) {
             Array out({static_cast<py::ssize_t>(g.node_count()), static_cast<py::ssize_t>(g.dim())});
             auto v = out.mutable_unchecked<2>();
             for (std::size_t i = 0; i < g.node_count(); ++i) {
               const auto c = g.coordinates(i);
               for (int d = 0; d < g.dim(); ++d) v(i, d) = c[d];
             }
             return out;
           })
      .def("__repr__", [](const Grid& g) {
        return "Grid(dim=" + std::to_string(g.dim()) + ", half_extent=" + std::to_string(g.half_extent()) +
               ", points_per_axis=" + std::to_string(g.points_per_axis()) + ", topology='" +
               to_string(g.topology()) + "')";
      });

  m.def("normalization_constant", &normalization_constant, py::arg("dim"), py::arg("alpha"));
  m.def("riesz_constant", &riesz_constant, py::arg("dim"), py::arg("alpha"));
  m.def("cutoff_profile", &cutoff_profile, py::arg("r"));

  m.def(
      "apply_spectral", [](const Grid& g, const Array& u, double alpha) { return to_array(apply_spectral(to_field(g, u), alpha)); },
      py::arg("grid"), py::arg("u"), py::arg("alpha"));
  m.def(
      "apply_quadrature",
      [](const Grid& g, const Array& u, double alpha, const py::object& exterior) {
        return to_array(build_operator_matrix(g, alpha, exterior_from(exterior)).apply(to_field(g, u)));
      },
      py::arg("grid"), py::arg("u"), py::arg("alpha"), py::arg("exterior") = "zero");
  m.def(
      "operator_matrix",
      [](const Grid& g, double alpha, const py::object& exterior) {
        const Eigen::MatrixXd d = build_operator_matrix(g, alpha, exterior_from(exterior)).dense();
        Array out({d.rows(), d.cols()});
        auto v = out.mutable_unchecked<2>();
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
          for (Eigen::Index j = 0; j < d.cols(); ++j) v(i, j) = d(i, j);
        }
        return out;
      },
      py::arg("grid"), py::arg("alpha"), py::arg("exterior") = "zero");

  m.def(
      "riesz_convolve",
      [](const Grid& g, const Array& k, double alpha) {
        return to_array(riesz_convolve(to_field(g, k), make_frac_params(g.dim(), alpha)));
      },
      py::arg("grid"), py::arg("k"), py::arg("alpha"));
  m.def(
      "solve_dirichlet_ball",
      [](const Grid& g, const Array& k, double R, double alpha, double exterior_value) {
        return to_array(solve_dirichlet_ball(to_field(g, k), R, make_frac_params(g.dim(), alpha), exterior_value));
      },
      py::arg("grid"), py::arg("k"), py::arg("R"), py::arg("alpha"), py::arg("exterior_value") = 1.0);

  m.def(
      "solve_steady",
      [](const Grid& g, const Array& u0, double alpha, double time_step, long max_steps, double tol) {
        const Field f = to_field(g, u0);
        GLConfig cfg;
        cfg.alpha = alpha;
        cfg.time_step = time_step;
        cfg.max_steps = max_steps;
        cfg.steady_tolerance = tol;
        cfg.components = f.components();
        const GLSteady s = [&] {
          py::gil_scoped_release release;
          return solve_steady(f, cfg);
        }();
        py::dict info;
        info["steps"] = s.trace.records.empty() ? 0L : s.trace.records.back().step;
        info["steady"] = s.trace.steady;
        info["residual"] = s.trace.residual;
        info["margin"] = s.trace.margin;
        info["bound_satisfied"] = s.trace.bound_satisfied;
        return py::make_tuple(to_array(s.u), info);
      },
      py::arg("grid"), py::arg("u0"), py::arg("alpha") = 1.0, py::arg("time_step") = 0.1,
      py::arg("max_steps") = 100000, py::arg("steady_tolerance") = 1e-10);

  m.def(
      "kato_check",
      [](const Grid& g, const Array& f, double alpha) {
        const ExteriorData ext = g.topology() == Topology::periodic ? ExteriorData::periodic() : ExteriorData::zero();
        return report_dict(kato_check(to_field(g, f), build_operator_matrix(g, alpha, ext)));
      },
      py::arg("grid"), py::arg("f"), py::arg("alpha"));
  m.def(
      "q_chain_check",
      [](const Grid& g, const Array& u, double alpha, double steady_residual) {
        return report_dict(q_chain_check(to_field(g, u), build_operator_matrix(g, alpha, ExteriorData::periodic()),
                                         steady_residual));
      },
      py::arg("grid"), py::arg("u"), py::arg("alpha"), py::arg("steady_residual"));

  m.def(
      "read_field",
      [](const std::string& path) {
        const Field f = read_field_file(path);
        return py::make_tuple(f.grid(), to_array(f));
      },
      py::arg("path"));
  m.def(
      "write_field", [](const std::string& path, const Grid& g, const Array& u) { write_field_file(path, to_field(g, u)); },
      py::arg("path"), py::arg("grid"), py::arg("u"));
}
