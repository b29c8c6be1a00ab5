#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ellhyp/cauchy.hpp"
#include "ellhyp/errors.hpp"
#include "ellhyp/identities.hpp"
#include "ellhyp/json_io.hpp"
#include "ellhyp/kernel.hpp"
#include "ellhyp/series.hpp"

namespace py = pybind11;
using namespace ellhyp;

namespace {

using Cvec = std::vector<cplx>;

KernelVariant variant_from(const std::string& name) {
  const auto v = parse_variant(name);
  if (!v) throw SchemaError("kernel", "unknown kernel '" + name + "'");
  return *v;
}

IntRange range_from(std::pair<int, int> r) { return {r.first, r.second}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elliptic, trigonometric and rational hypergeometric series";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidKernel>(m, "InvalidKernel", error);
  py::register_exception<NonConvergent>(m, "NonConvergent", error);
  py::register_exception<PoleHit>(m, "PoleHit", error);
  py::register_exception<SingularMatrix>(m, "SingularMatrix", error);
  py::register_exception<TerminationUnsatisfied>(m, "TerminationUnsatisfied", error);
  py::register_exception<LengthMismatch>(m, "LengthMismatch", error);
  py::register_exception<SamplingExhausted>(m, "SamplingExhausted", error);
  py::register_exception<ConstraintViolated>(m, "ConstraintViolated", error);
  py::register_exception<SchemaError>(m, "SchemaError", error);

  py::class_<ScaledComplex>(m, "ScaledComplex")
      .def(py::init<cplx>(), py::arg("value") = cplx(0.0, 0.0))
      .def_property_readonly("mantissa", &ScaledComplex::mantissa)
      .def_property_readonly("exp2", &ScaledComplex::exp2)
      .def("to_complex", &ScaledComplex::to_complex)
      .def("__complex__", &ScaledComplex::to_complex)
      .def("log2_abs", &ScaledComplex::log2_abs)
      .def("in_double_range", &ScaledComplex::in_double_range)
      .def("__str__", &ScaledComplex::to_string)
      .def("__repr__", [](const ScaledComplex& z) {
        return "ScaledComplex(" + z.to_string() + ")";
      });
  m.def("relative_difference", &relative_difference, py::arg("a"), py::arg("b"));

  py::class_<Gauge>(m, "Gauge")
      .def(py::init([](cplx a, cplx b, cplx c) { return Gauge{a, b, c}; }),
           py::arg("a") = cplx(0.0, 0.0), py::arg("b") = cplx(0.0, 0.0),
           py::arg("c") = cplx(1.0, 0.0))
      .def_readwrite("a", &Gauge::a)
      .def_readwrite("b", &Gauge::b)
      .def_readwrite("c", &Gauge::c);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("rational", &KernelSpec::rational, py::arg("gauge") = Gauge{},
                  py::arg("delta") = cplx(1.0, 0.0))
      .def_static("trigonometric", &KernelSpec::trigonometric,
                  py::arg("gauge") = Gauge{},
                  py::arg("delta") = KernelSpec::default_delta())
      .def_static("elliptic", &KernelSpec::elliptic, py::arg("omega1"),
                  py::arg("omega2"), py::arg("gauge") = Gauge{},
                  py::arg("delta") = KernelSpec::default_delta())
      .def_static("from_json",
                  [](const std::string& text) {
                    return json::kernel_from(json::parse(text));
                  })
      .def("to_json", [](const KernelSpec& k) { return json::to_json(k).dump(); })
      .def_property_readonly("variant",
                             [](const KernelSpec& k) { return std::string(to_string(k.variant())); })
      .def_property_readonly("delta", &KernelSpec::delta)
      .def_property_readonly("omega1", &KernelSpec::omega1)
      .def_property_readonly("omega2", &KernelSpec::omega2)
      .def_property_readonly("gauge", &KernelSpec::gauge)
      .def("with_gauge", &KernelSpec::with_gauge)
      .def("period", &KernelSpec::period)
      .def("__eq__", [](const KernelSpec& a, const KernelSpec& b) { return a == b; });

  m.def("bracket", &bracket, py::arg("kernel"), py::arg("x"));
  m.def("bracket_factorial", &bracket_factorial, py::arg("kernel"), py::arg("x"),
        py::arg("k"));
  m.def("exponential_trig_kernel", &exponential_trig_kernel, py::arg("delta"));

  py::class_<Termination>(m, "Termination")
      .def_static("mode_a", &Termination::mode_a, py::arg("k"), py::arg("N"))
      .def_static("mode_b",
                  [](std::vector<int> alpha) {
                    return Termination::mode_b(MultiIndex(std::move(alpha)));
                  },
                  py::arg("alpha"));

  m.def(
      "phi",
      [](Cvec a, Cvec x, Cvec b, Cvec c, int N, const KernelSpec& k) {
        return phi({std::move(a), std::move(x), std::move(b), std::move(c), N, k});
      },
      py::arg("a"), py::arg("x"), py::arg("b"), py::arg("c"), py::arg("N"),
      py::arg("kernel"));
  m.def(
      "e_series",
      [](Cvec a, Cvec x, cplx s, Cvec u, Cvec v, const KernelSpec& k,
         const Termination& t) {
        return e_series({std::move(a), std::move(x), s, std::move(u), std::move(v), k, t});
      },
      py::arg("a"), py::arg("x"), py::arg("s"), py::arg("u"), py::arg("v"),
      py::arg("kernel"), py::arg("termination"));
  m.def(
      "e_single",
      [](cplx s, const Cvec& args, const KernelSpec& k, int N) {
        return e_single(s, args, k, N);
      },
      py::arg("s"), py::arg("args"), py::arg("kernel"), py::arg("N"));
  m.def(
      "phi_basic",
      [](cplx q, Cvec a, Cvec x, Cvec b, Cvec c, int N) {
        return phi_basic({q, std::move(a), std::move(x), std::move(b), std::move(c), N});
      },
      py::arg("q"), py::arg("a"), py::arg("x"), py::arg("b"), py::arg("c"),
      py::arg("N"));
  m.def(
      "w_series",
      [](cplx q, Cvec a, Cvec x, cplx s, Cvec u, Cvec v, const Termination& t) {
        return w_series({q, std::move(a), std::move(x), s, std::move(u), std::move(v), t});
      },
      py::arg("q"), py::arg("a"), py::arg("x"), py::arg("s"), py::arg("u"),
      py::arg("v"), py::arg("termination"));
  m.def(
      "eval_json",
      [](const std::string& series, const std::string& text) {
        const auto j = json::parse(text);
        if (series == "phi") return phi(json::phi_params_from(j));
        if (series == "e") return e_series(json::e_params_from(j));
        if (series == "phi_basic") return phi_basic(json::basic_phi_params_from(j));
        if (series == "w") return w_series(json::w_params_from(j));
        throw SchemaError("series", "expected phi, e, phi_basic or w");
      },
      py::arg("series"), py::arg("text"));

  m.def(
      "cauchy_det_numeric",
      [](const KernelSpec& k, cplx lambda, Cvec z, Cvec w) {
        return cauchy_det_numeric({k, lambda, std::move(z), std::move(w), {}});
      },
      py::arg("kernel"), py::arg("lam"), py::arg("z"), py::arg("w"));
  m.def(
      "cauchy_det_closed",
      [](const KernelSpec& k, cplx lambda, Cvec z, Cvec w) {
        return cauchy_det_closed({k, lambda, std::move(z), std::move(w), {}});
      },
      py::arg("kernel"), py::arg("lam"), py::arg("z"), py::arg("w"));

  m.def("list_identities", [] {
    std::vector<py::dict> out;
    for (const auto& info : list_identities()) {
      py::dict d;
      d["name"] = std::string(info.name);
      d["anchor"] = std::string(info.anchor);
      d["description"] = std::string(info.description);
      d["constraints"] = std::string(info.constraints);
      out.push_back(d);
    }
    return out;
  });

  m.def(
      "run_suite_jsonl",
      [](const std::vector<std::string>& identities,
         const std::vector<std::string>& kernels, std::pair<int, int> mr,
         std::pair<int, int> nr, std::pair<int, int> Nr, std::pair<int, int> Mr,
         std::optional<std::vector<int>> alpha, int trials, std::uint64_t seed,
         std::optional<double> tol, bool random_gauge, bool break_balance, int jobs) {
        SuiteConfig cfg;
        for (const auto& name : identities) {
          const auto id = parse_identity(name);
          if (!id) throw SchemaError("identity", "unknown identity '" + name + "'");
          cfg.ids.push_back(*id);
        }
        for (const auto& name : kernels) cfg.kernels.push_back(variant_from(name));
        cfg.m = range_from(mr);
        cfg.n = range_from(nr);
        cfg.N = range_from(Nr);
        cfg.M = range_from(Mr);
        if (alpha) cfg.alpha = MultiIndex(*alpha);
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.tol = tol;
        cfg.random_gauge = random_gauge;
        cfg.break_balance = break_balance;
        cfg.jobs = jobs;
        std::vector<VerificationReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_suite(cfg);
        }
        return json::reports_jsonl(reports);
      },
      py::arg("identities"), py::arg("kernels"), py::arg("m"), py::arg("n"),
      py::arg("N"), py::arg("M"), py::arg("alpha"), py::arg("trials"),
      py::arg("seed"), py::arg("tol"), py::arg("random_gauge"),
      py::arg("break_balance"), py::arg("jobs"));
}
