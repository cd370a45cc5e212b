#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "indefsl/bounds.hpp"
#include "indefsl/coeffs.hpp"
#include "indefsl/errors.hpp"
#include "indefsl/locate.hpp"
#include "indefsl/oracle.hpp"
#include "indefsl/problem_io.hpp"
#include "indefsl/shooting.hpp"

namespace py = pybind11;
using namespace indefsl;

namespace {

PiecewiseFn make_fn(std::vector<double> xs, std::vector<double> vs) {
  return PiecewiseFn(std::move(xs), std::move(vs));
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

py::dict box_dict(const BoundBox& b) {
  py::dict d;
  d["kind"] = to_string(b.kind);
  d["applicable"] = b.applicable;
  d["re_max"] = b.re_max;
  d["im_max"] = b.im_max;
  d["eps_used"] = b.eps_used ? py::cast(*b.eps_used) : py::none();
  d["reason"] = b.reason;
  d["imaginary_axis_only"] = b.imaginary_axis_only;
  return d;
}

py::dict record_dict(const EigenvalueRecord& r) {
  py::dict d;
  d["lambda"] = r.lambda;
  d["winding"] = r.winding;
  d["newton_residual"] = r.newton_residual;
  d["wphi2_residual"] = r.identity.wphi2;
  d["dirichlet_residual"] = r.identity.dirichlet_form;
  d["phi_prime_sq"] = r.identity.phi_prime_sq;
  d["gradient_bound"] = r.identity.gradient_bound;
  d["reflection"] = r.identity.reflection;
  d["source"] = to_string(r.source);
  return d;
}

}  // namespace

PYBIND11_MODULE(_indefsl, m) {
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base);
  py::register_exception<HypothesisError>(m, "HypothesisError", base);
  py::register_exception<NumericalError>(m, "NumericalError", base);

  py::class_<PiecewiseFn>(m, "PiecewiseFn")
      .def(py::init(&make_fn), py::arg("breakpoints"), py::arg("values"))
      .def_static("constant", &PiecewiseFn::constant)
      .def_static("linear", &PiecewiseFn::linear)
      .def_static("sign_ramp", &PiecewiseFn::sign_ramp)
      .def("__call__", &PiecewiseFn::operator())
      .def_property_readonly("breakpoints", [](const PiecewiseFn& f) { return to_vec(f.breakpoints()); })
      .def_property_readonly("values", [](const PiecewiseFn& f) { return to_vec(f.values()); });

  py::class_<ProblemFlags>(m, "ProblemFlags")
      .def_readonly("w_nonvanishing_ae", &ProblemFlags::w_nonvanishing_ae)
      .def_readonly("single_turning_point", &ProblemFlags::single_turning_point)
      .def_readonly("symmetric", &ProblemFlags::symmetric)
      .def_readonly("q_lower_bound", &ProblemFlags::q_lower_bound)
      .def_readonly("w_lower_bound", &ProblemFlags::w_lower_bound);

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("q", &Problem::q)
      .def_property_readonly("w", &Problem::w)
      .def_property_readonly("flags", &Problem::flags)
      .def_property_readonly("breakpoints", &Problem::breakpoints);

  m.def("problem", &detect_flags, py::arg("q"), py::arg("w"));
  m.def("richardson", &richardson, py::arg("mu"),
        py::arg("ramp_half_width") = kDefaultRampHalfWidth);
  m.def("parse_problem", [](const std::string& doc) { return parse_problem(doc); });
  m.def("load_problem", &load_problem);

  m.def("bounds", [](const Problem& p, double margin) {
    const BoundsReport r = all_bounds(p, margin);
    py::dict d;
    d["xw_measure"] = box_dict(r.xw);
    d["w2_measure"] = box_dict(r.w2);
    d["symmetric_imaginary"] = box_dict(r.imaginary);
    d["search_region"] = box_dict(r.region);
    return d;
  }, py::arg("problem"), py::arg("margin") = kDefaultMargin);

  m.def("shoot", [](const Problem& p, cplx lam, double tol) {
    const Shot s = shoot(p, lam, tol);
    py::dict d;
    d["miss"] = s.miss;
    d["miss_prime"] = s.miss_prime;
    d["log_scale"] = s.log_scale;
    d["steps"] = s.steps;
    return d;
  }, py::arg("problem"), py::arg("lam"), py::arg("tol") = kDefaultTol);

  m.def("negative_eigenvalue_count", [](const PiecewiseFn& q, const PiecewiseFn& weight, double tol) {
    return negative_eigenvalue_count(q, weight, tol).zeros_interior;
  }, py::arg("q"), py::arg("weight"), py::arg("tol") = 1e-10);

  m.def("winding_count", [](const Problem& p, double re_lo, double re_hi, double im_lo,
                            double im_hi, double tol) {
    return winding_count(p, Rect{re_lo, re_hi, im_lo, im_hi}, tol);
  }, py::arg("problem"), py::arg("re_lo"), py::arg("re_hi"), py::arg("im_lo"),
     py::arg("im_hi"), py::arg("tol") = kDefaultContourTol);

  m.def("newton_refine", [](const Problem& p, cplx seed, double tol) {
    return record_dict(newton_refine(p, seed, tol));
  }, py::arg("problem"), py::arg("seed"), py::arg("tol") = 1e-12);

  m.def("find_nonreal", [](const Problem& p, double margin) {
    LocateOptions opt;
    opt.margin = margin;
    const NonrealResult r = find_nonreal(p, opt);
    py::list recs;
    for (const auto& e : r.records) recs.append(record_dict(e));
    py::dict d;
    d["records"] = recs;
    d["region"] = box_dict(r.region);
    d["negative_count"] = r.negative_count;
    d["cap_satisfied"] = r.cap_satisfied;
    d["symmetric_closed"] = r.symmetric_closed;
    d["caveat"] = r.caveat;
    return d;
  }, py::arg("problem"), py::arg("margin") = kDefaultMargin);

  m.def("oracle_eigenvalues", [](const Problem& p, int n) {
    const OracleSpectrum s = eigen_all(discretize(p, n));
    py::dict d;
    d["eigenvalues"] = s.eigenvalues;
    d["max_residual"] = s.max_residual;
    d["nonreal"] = nonreal_eigenvalues(s);
    return d;
  }, py::arg("problem"), py::arg("n") = 2000);
}
