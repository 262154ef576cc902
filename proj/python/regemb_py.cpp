#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "regemb/bounds.hpp"
#include "regemb/cli.hpp"
#include "regemb/error.hpp"
#include "regemb/io.hpp"
#include "regemb/polynomial.hpp"
#include "regemb/reduction.hpp"
#include "regemb/search.hpp"
#include "regemb/verifier.hpp"

namespace py = pybind11;
using namespace regemb;

namespace {

using Vec = std::vector<double>;

Eigen::VectorXd to_eigen(const Vec& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

Configuration make_configuration(const std::vector<Vec>& through, const std::vector<Vec>& tangency,
                                 const std::vector<std::vector<Vec>>& directions) {
  Configuration c;
  for (const auto& p : through) c.through_points.push_back(to_eigen(p));
  for (const auto& p : tangency) c.tangency_points.push_back(to_eigen(p));
  for (const auto& group : directions) {
    c.directions.emplace_back();
    for (const auto& u : group) c.directions.back().push_back(to_eigen(u));
  }
  return c;
}

std::vector<Rational> rationals(const std::vector<std::string>& text) {
  std::vector<Rational> out;
  for (const auto& t : text) out.push_back(parse_rational(t));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regular embeddings: verification, search, bounds and projection";
  // ValueError subclass carrying the machine-readable kind
  static PyObject* error_type = PyErr_NewException("regemb._core.RegembError", PyExc_ValueError, nullptr);
  m.add_object("RegembError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type, err.ptr());
    }
  });

  py::class_<EmbeddingSpec>(m, "Map")
      .def_property_readonly("ambient_dim", &EmbeddingSpec::ambient_dim)
      .def_property_readonly("domain_dim", [](const EmbeddingSpec& s) { return s.domain().dim(); })
      .def("__call__", [](const EmbeddingSpec& s, const Vec& point) {
        const Eigen::VectorXd v = evaluate(s, to_eigen(point));
        return Vec(v.data(), v.data() + v.size());
      });

  m.def("parse_map", &parse_map, py::arg("descriptor"));
  m.def("moment_curve", &moment_curve, py::arg("m"));
  m.def("trig_curve", &trig_curve, py::arg("h"));
  m.def("complex_moment_curve", &complex_moment_curve, py::arg("m"));
  m.def("tensor_product", &tensor_product, py::arg("f"), py::arg("g"));

  m.def(
      "check_configuration",
      [](const EmbeddingSpec& spec, const std::vector<Vec>& through, const std::vector<Vec>& tangency,
         const std::vector<std::vector<Vec>>& directions, double tol, bool subspace) {
        const Configuration c = make_configuration(through, tangency, directions);
        const RegularityVerdict v = subspace ? check_subspace_configuration(spec, c, tol) : check_configuration(spec, c, tol);
        return to_json(v).dump();
      },
      py::arg("spec"), py::arg("through"), py::arg("tangency"), py::arg("directions"), py::arg("tol") = kDefaultRankTolerance,
      py::arg("subspace") = false);

  m.def(
      "sample_verify",
      [](const EmbeddingSpec& spec, int k, int l, long long samples, double delta_min, std::uint64_t seed, double tol,
         unsigned threads) {
        SampleOptions o;
        o.num_samples = samples;
        o.delta_min = delta_min;
        o.seed = seed;
        o.tol = tol;
        o.threads = threads;
        py::gil_scoped_release release;
        return to_json(sample_verify(spec, k, l, o)).dump();
      },
      py::arg("spec"), py::arg("k"), py::arg("l"), py::arg("samples") = 1000, py::arg("delta_min") = 1e-3, py::arg("seed") = 0,
      py::arg("tol") = kDefaultRankTolerance, py::arg("threads") = 0);

  m.def(
      "adversarial_search",
      [](const EmbeddingSpec& spec, int k, int l, int restarts, int iters, double delta_min, std::uint64_t seed, double tol) {
        SearchOptions o;
        o.restarts = restarts;
        o.iters = iters;
        o.delta_min = delta_min;
        o.seed = seed;
        o.tol = tol;
        py::gil_scoped_release release;
        return to_json(adversarial_search(spec, k, l, o)).dump();
      },
      py::arg("spec"), py::arg("k"), py::arg("l"), py::arg("restarts") = 10, py::arg("iters") = 1000, py::arg("delta_min") = 1e-2,
      py::arg("seed") = 0, py::arg("tol") = kDefaultRankTolerance);

  m.def(
      "bounds", [](int n, int k, int l, bool closed) { return to_json(bounds_table(n, k, l, closed)).dump(); }, py::arg("n"),
      py::arg("k"), py::arg("l"), py::arg("closed") = false);

  m.def(
      "vandermonde_certificate",
      [](const std::vector<std::string>& simple, const std::vector<std::string>& dbl) {
        return to_json(confluent_vandermonde_certificate(rationals(simple), rationals(dbl))).dump();
      },
      py::arg("simple"), py::arg("double"));

  m.def(
      "count_roots",
      [](const std::vector<std::string>& coefficients, const std::string& basis, double lower, double upper) {
        if (basis == "trig") return count_trig_roots(rationals(coefficients));
        if (basis != "monomial") throw Error(ErrorKind::InvalidParameter, "basis must be monomial or trig");
        return count_monomial_roots(rationals(coefficients), RootDomain{lower, upper});
      },
      py::arg("coefficients"), py::arg("basis") = "monomial", py::arg("lower") = -INFINITY, py::arg("upper") = INFINITY);

  m.def(
      "reduce_dimension",
      [](const EmbeddingSpec& spec, int k, int l, int target, long long budget, int retries, std::uint64_t seed) {
        ReduceOptions o;
        o.budget = budget;
        o.max_retries = retries;
        o.seed = seed;
        py::gil_scoped_release release;
        return to_json(reduce_dimension(spec, k, l, target, o)).dump();
      },
      py::arg("spec"), py::arg("k"), py::arg("l"), py::arg("target"), py::arg("budget") = 10000, py::arg("retries") = 32,
      py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.def("version", &version);
}
