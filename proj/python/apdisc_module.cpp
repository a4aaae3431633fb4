#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apdisc/bounds.hpp"
#include "apdisc/canonical.hpp"
#include "apdisc/certify.hpp"
#include "apdisc/error.hpp"
#include "apdisc/grid.hpp"
#include "apdisc/lattice.hpp"
#include "apdisc/solver.hpp"

namespace py = pybind11;
using namespace apdisc;

namespace {

py::tuple witness_tuple(const APSpec& ap) {
  return py::make_tuple(ap.start, ap.diff, ap.length);
}

std::vector<int> values_of(const PartialColoring& chi) {
  return {chi.values().begin(), chi.values().end()};
}

PartialColoring make_coloring(const std::vector<Coord>& dims, const std::vector<int>& values) {
  GridShape shape(dims);
  if (static_cast<std::int64_t>(values.size()) != shape.size())
    throw InputError("expected " + std::to_string(shape.size()) + " values, got " +
                     std::to_string(values.size()));
  PartialColoring chi(shape);
  for (std::size_t i = 0; i < values.size(); ++i) chi.set(static_cast<std::int64_t>(i), values[i]);
  return chi;
}

}  // namespace

PYBIND11_MODULE(_apdisc, m) {
  m.doc() = "Arithmetic-progression discrepancy on integer grids";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", input_error.ptr());
  py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);

  py::class_<PartialColoring>(m, "Coloring")
      .def(py::init(&make_coloring), py::arg("dims"), py::arg("values"),
           "Row-major colors in {-1, 0, 1}; axis 1 varies slowest.")
      .def_property_readonly("dims", [](const PartialColoring& c) { return c.shape().dims(); })
      .def_property_readonly("values", &values_of)
      .def("is_full", &PartialColoring::is_full)
      .def("__len__", [](const PartialColoring& c) { return c.shape().size(); })
      .def("__eq__", [](const PartialColoring& a, const PartialColoring& b) { return a == b; })
      .def("__repr__", [](const PartialColoring& c) {
        return "Coloring(" + c.shape().to_string() + ")";
      });

  m.def(
      "disc_eval",
      [](const PartialColoring& chi, unsigned threads) {
        py::gil_scoped_release release;
        const auto r = disc_eval(chi, threads);
        py::gil_scoped_acquire acquire;
        return py::make_tuple(r.value, witness_tuple(r.witness));
      },
      py::arg("chi"), py::arg("threads") = 1,
      "Max |chi(A)| over all progressions A in the grid, with a witness (start, diff, length).");

  m.def(
      "chi_sum",
      [](const PartialColoring& chi, const Point& start, const Direction& diff, Coord length) {
        return chi_sum(chi, APSpec{start, diff, length});
      },
      py::arg("chi"), py::arg("start"), py::arg("diff"), py::arg("length"));

  py::class_<ColoringResult>(m, "ColoringResult")
      .def_readonly("chi", &ColoringResult::chi)
      .def_readonly("ledger_bound", &ColoringResult::ledger_bound)
      .def_readonly("truncation", &ColoringResult::truncation)
      .def_readonly("schedule", &ColoringResult::schedule)
      .def_property_readonly("rounds", [](const ColoringResult& r) { return r.rounds.size(); })
      .def_property_readonly("disc_before_polish",
                             [](const ColoringResult& r) { return r.polish.before; });

  m.def(
      "solve",
      [](const std::vector<Coord>& dims, const std::string& method, std::uint64_t seed,
         int polish_sweeps, double delta_scale, double schedule_c, unsigned threads) {
        SolveConfig cfg;
        cfg.method = parse_method(method);
        cfg.seed = seed;
        cfg.polish_sweeps = polish_sweeps;
        cfg.delta_scale = delta_scale;
        cfg.schedule_c = schedule_c;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return solve(GridShape(dims), cfg);
      },
      py::arg("dims"), py::arg("method") = "partial-coloring", py::arg("seed") = 0,
      py::arg("polish_sweeps") = SolveConfig{}.polish_sweeps, py::arg("delta_scale") = 1.0,
      py::arg("schedule_c") = 1.0, py::arg("threads") = 1,
      "Full coloring by the chosen method: partial-coloring, random or exact.");

  m.def(
      "exact_min_disc",
      [](const std::vector<Coord>& dims, std::int64_t cap) {
        const auto r = exact_min_disc(GridShape(dims), cap);
        return py::make_tuple(r.value, r.witness);
      },
      py::arg("dims"), py::arg("cap") = 24);

  py::class_<LowerBoundCert>(m, "LowerBoundCert")
      .def_readonly("R", &LowerBoundCert::R)
      .def_readonly("I_star", &LowerBoundCert::I_star)
      .def_readonly("L", &LowerBoundCert::L)
      .def_readonly("D", &LowerBoundCert::D)
      .def_readonly("c_d", &LowerBoundCert::c_d)
      .def_readonly("value", &LowerBoundCert::value)
      .def("hypothesis_holds", &LowerBoundCert::hypothesis_holds);

  m.def("lower_bound_value", [](const std::vector<Coord>& dims) {
    return lower_bound_value(GridShape(dims));
  });
  m.def(
      "manual_cert",
      [](const std::vector<Coord>& dims, std::int64_t L, std::vector<std::int64_t> D) {
        return manual_cert(GridShape(dims), L, std::move(D));
      },
      py::arg("dims"), py::arg("L"), py::arg("D"));
  m.def(
      "energy_inequality_check",
      [](const PartialColoring& chi, const LowerBoundCert& cert) {
        const auto e = energy_inequality_check(chi, cert);
        return py::make_tuple(e.lhs, e.rhs, e.pass);
      },
      py::arg("chi"), py::arg("cert"), "Returns (lhs, rhs, pass).");

  m.def(
      "bound_report",
      [](const std::vector<Coord>& dims, double c_upper) {
        const auto r = bound_report(GridShape(dims), c_upper);
        py::dict d;
        d["lower"] = r.lower;
        d["upper"] = r.upper;
        d["R"] = r.R;
        d["almost_cube"] = r.almost_cube;
        d["delta"] = r.delta;
        d["upper_form"] = r.upper_form;
        return d;
      },
      py::arg("dims"), py::arg("c_upper") = 1.0);

  m.def(
      "f_count",
      [](const std::vector<Point>& X, Coord s) { return f_count(X, s); }, py::arg("X"),
      py::arg("s"), "Dyadic blocks of size s over every direction.");
  m.def(
      "u_sum",
      [](const std::vector<Point>& X, std::int64_t s) { return u_sum_two_signed(X, s); },
      py::arg("X"), py::arg("s"));
  m.def(
      "count_small_gcd_points",
      [](const std::vector<std::int64_t>& n, std::int64_t num, std::int64_t den) {
        return count_small_gcd_points(n, num, den);
      },
      py::arg("n"), py::arg("num"), py::arg("den"));

  m.def(
      "lll_reduce",
      [](const IMatrix& rows, std::int64_t num, std::int64_t den) {
        return lll_reduce(LatticeBasis::from_integers(rows), Rational(num, den)).to_integers();
      },
      py::arg("rows"), py::arg("delta_num") = 3, py::arg("delta_den") = 4);

  m.def(
      "projection_map",
      [](const std::vector<std::int64_t>& b, const std::vector<Coord>& dims) {
        const auto pm = projection_map(b, GridShape(dims));
        py::dict d;
        d["M"] = pm.M;
        d["v"] = pm.v;
        d["target"] = pm.target;
        d["lambda"] = to_string(pm.lambda);
        d["volume_ratio"] = to_string(pm.volume_ratio);
        return d;
      },
      py::arg("b"), py::arg("dims"));
}
