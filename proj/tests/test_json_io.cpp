#include <doctest.h>

#include <string>

#include "ellhyp/errors.hpp"
#include "ellhyp/json_io.hpp"

using namespace ellhyp;
namespace ej = ellhyp::json;

namespace {

// Field named by the SchemaError thrown while parsing E params, or "".
std::string failing_field(const std::string& text) {
  try {
    ej::e_params_from(ej::parse(text));
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

const char* kEFile = R"({
  "kernel": {"variant": "rational", "gauge": {"a": [0, 0], "b": [0, 0], "c": [1, 0]}, "delta": [1, 0]},
  "a": [[0.3, 0.1]], "x": [[0.1, 0.2]], "s": [0.4, -0.1],
  "u": [[0.2, 0.0]], "v": [[-2, 0]],
  "termination": {"mode": "A", "k": 0, "N": 2}
})";

}  // namespace

TEST_CASE("complex values are [re, im] pairs") {
  CHECK(ej::complex_from(ej::parse("[1.5, -2]"), "z") == cplx(1.5, -2.0));
  CHECK(ej::complex_from(ej::parse("3"), "z") == cplx(3.0, 0.0));
  CHECK_THROWS_AS(ej::complex_from(ej::parse("[1, 2, 3]"), "z"), SchemaError);
  CHECK(ej::to_json(cplx(0.25, -1.0)).dump() == "[0.25,-1.0]");
}

TEST_CASE("kernel round trip") {
  const KernelSpec k = KernelSpec::elliptic(
      1.0, cplx(0.2, 1.3), Gauge{{0.1, 0.0}, {0.0, 0.2}, {0.9, 0.1}}, cplx(0.3, 0.1));
  CHECK(ej::kernel_from(ej::to_json(k)) == k);
  const KernelSpec t = KernelSpec::trigonometric();
  CHECK(ej::kernel_from(ej::parse(R"({"variant": "trigonometric"})")) == t);
}

TEST_CASE("kernel errors name the field") {
  try {
    ej::kernel_from(ej::parse(R"({"variant": "elliptic", "omega1": [1, 0]})"));
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "kernel.omega2");
  }
  try {
    ej::kernel_from(ej::parse(R"({"variant": "hyperbolic"})"));
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "kernel.variant");
  }
  // Degenerate lattice.
  CHECK_THROWS_AS(ej::kernel_from(ej::parse(
                      R"({"variant": "elliptic", "omega1": [1, 0], "omega2": [2, 0]})")),
                  SchemaError);
}

TEST_CASE("E params parse") {
  const EParams p = ej::e_params_from(ej::parse(kEFile));
  CHECK(p.a.size() == 1);
  CHECK(p.v[0] == cplx(-2.0, 0.0));
  CHECK(p.s == cplx(0.4, -0.1));
  CHECK(p.termination.mode == TerminationMode::A);
  CHECK(p.termination.N == 2);
  CHECK(p.kernel.variant() == KernelVariant::Rational);
}

TEST_CASE("missing and malformed fields") {
  CHECK(failing_field(R"({"a": []})") == "kernel");
  CHECK(failing_field(R"({"kernel": {"variant": "rational"}, "a": [], "x": [],
                          "s": 0, "u": [], "v": []})") == "termination");
  CHECK(failing_field(R"({"kernel": {"variant": "rational"}, "a": [[1]], "x": [],
                          "s": 0, "u": [], "v": [], "termination": {"mode": "B", "alpha": []}})") ==
        "a[0]");
  CHECK(failing_field(R"({"kernel": {"variant": "rational"}, "a": [], "x": [],
                          "s": 0, "u": [], "v": [], "termination": {"mode": "C"}})") ==
        "termination.mode");
  CHECK(failing_field(R"({"kernel": {"variant": "rational"}, "a": [], "x": [],
                          "s": 0, "u": [], "v": [], "termination": {"mode": "B", "alpha": [-1]}})") ==
        "termination.alpha");
  CHECK(failing_field("{ not json") == "<document>");
}

TEST_CASE("W and basic phi params parse") {
  const WParams w = ej::w_params_from(ej::parse(R"({
    "q": [0.3, 0.1], "a": [[0.5, 0]], "x": [[0.7, 0.1]], "s": [0.9, 0],
    "u": [], "v": [], "termination": {"mode": "B", "alpha": [2]}})"));
  CHECK(w.q == cplx(0.3, 0.1));
  CHECK(w.termination.alpha.weight() == 2);
  const BasicPhiParams b = ej::basic_phi_params_from(ej::parse(R"({
    "q": 0.4, "a": [0.1], "x": [0.2], "b": [], "c": [], "N": 3})"));
  CHECK(b.N == 3);
  CHECK(b.a[0] == cplx(0.1, 0.0));
}

TEST_CASE("report serialization is stable") {
  SuiteConfig cfg;
  cfg.ids = {IdentityId::DualityPhi};
  cfg.kernels = {KernelVariant::Rational, KernelVariant::Elliptic};
  cfg.trials = 2;
  cfg.seed = 11;
  const auto reports = run_suite(cfg);
  const std::string a = ej::reports_jsonl(reports);
  const std::string b = ej::reports_jsonl(run_suite(cfg));
  CHECK(a == b);
  CHECK(a.find("wall_time") == std::string::npos);
  const auto first = ej::parse(a.substr(0, a.find('\n')));
  CHECK(first["id"] == "duality_phi");
  CHECK(first.contains("lhs"));
  CHECK(first["lhs"].contains("mantissa"));
  CHECK(first["outcome"] == "pass");

  const std::string csv = ej::aggregate_csv(reports);
  CHECK(csv.rfind("id,kernel,m,n,N,trials,passes,max_rel_err,mean_wall_time\n", 0) == 0);
  // ranges m,n in 1..2, N in 0..3, two kernels: 2*2*4*2 rows plus header.
  int lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 1 + 32);
  CHECK(csv.find("duality_phi,rational,1,1,0,2,2,") != std::string::npos);
}
