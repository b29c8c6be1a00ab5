#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "ellhyp/errors.hpp"
#include "ellhyp/identities.hpp"
#include "ellhyp/series.hpp"

using namespace ellhyp;

namespace {

const std::vector<KernelVariant> kAllVariants{
    KernelVariant::Rational, KernelVariant::Trigonometric,
    KernelVariant::Elliptic};

std::vector<IdentityId> all_ids() {
  std::vector<IdentityId> ids;
  for (const auto& info : list_identities()) ids.push_back(info.id);
  return ids;
}

KernelSpec plain(KernelVariant v) {
  switch (v) {
    case KernelVariant::Rational:
      return KernelSpec::rational();
    case KernelVariant::Trigonometric:
      return KernelSpec::trigonometric();
    case KernelVariant::Elliptic:
      return KernelSpec::elliptic(1.0, cplx(0.0, 1.1));
  }
  return {};
}

}  // namespace

TEST_CASE("registry order and lookup") {
  const auto infos = list_identities();
  REQUIRE(infos.size() == 24);
  const std::vector<std::string> expected{
      "cauchy_det",        "f_symmetry",         "f_coefficient_d",
      "ppd_specialized",   "duality_phi",        "duality_phi_tfpp",
      "duality_phi_be",    "duality_phi_basic",  "phi_to_e",
      "e_to_phi",          "phi2n_reduction",    "e_duality",
      "jackson_sum_em2",   "frenkel_turaev_8e7", "e_m3_to_2m8",
      "bailey_10e9",       "bailey_I_A",         "bailey_II_A",
      "bailey_I_B",        "bailey_II_B",        "bailey_I_W",
      "bailey_II_W",       "e_periodicity",      "euler_transformation"};
  for (std::size_t i = 0; i < infos.size(); ++i) {
    CHECK(infos[i].name == expected[i]);
    CHECK(static_cast<std::size_t>(infos[i].id) == i);
    CHECK(parse_identity(infos[i].name) == infos[i].id);
    CHECK(to_string(infos[i].id) == infos[i].name);
    CHECK(!infos[i].anchor.empty());
  }
  CHECK_FALSE(parse_identity("bailey_III").has_value());
  CHECK_FALSE(identity_applies(IdentityId::EPeriodicity, KernelVariant::Rational));
  CHECK(identity_applies(IdentityId::EPeriodicity, KernelVariant::Elliptic));
  CHECK_FALSE(identity_applies(IdentityId::BaileyIW, KernelVariant::Elliptic));
  CHECK(identity_applies(IdentityId::BaileyIA, KernelVariant::Rational));
}

TEST_CASE("default tolerances") {
  CHECK(default_tolerance(IdentityId::DualityPhi, KernelVariant::Elliptic) == 1e-7);
  CHECK(default_tolerance(IdentityId::DualityPhi, KernelVariant::Rational) == 1e-9);
  CHECK(default_tolerance(IdentityId::EulerTransformation,
                          KernelVariant::Trigonometric) == 1e-6);
}

TEST_CASE("every identity passes on every applicable kernel") {
  SuiteConfig cfg;
  cfg.ids = all_ids();
  cfg.kernels = kAllVariants;
  cfg.m = {1, 2};
  cfg.n = {1, 2};
  cfg.N = {0, 3};
  cfg.M = {1, 4};
  cfg.trials = 3;
  cfg.seed = 20240917;
  const auto reports = run_suite(cfg);
  std::set<std::pair<IdentityId, KernelVariant>> seen;
  for (const auto& r : reports) {
    INFO(to_string(r.id), " ", to_string(r.draw.kernel.variant()), " m=",
         r.draw.sizes.m, " n=", r.draw.sizes.n, " N=", r.draw.sizes.N,
         " rel_err=", r.rel_err, " note=", r.note);
    CHECK(r.outcome == Outcome::Pass);
    CHECK(r.cancellation <= kMaxCancellation);
    seen.insert({r.id, r.draw.kernel.variant()});
  }
  for (const auto& info : list_identities()) {
    for (auto v : kAllVariants) {
      if (identity_applies(info.id, v)) {
        INFO(info.name, " on ", to_string(v));
        CHECK(seen.count({info.id, v}) == 1);
      }
    }
  }
}

TEST_CASE("type (B) Bailey identities with a given alpha") {
  SuiteConfig cfg;
  cfg.ids = {IdentityId::BaileyIB, IdentityId::BaileyIIB, IdentityId::BaileyIW,
             IdentityId::BaileyIIW};
  cfg.kernels = kAllVariants;
  cfg.alpha = MultiIndex({2, 0, 1});
  cfg.trials = 4;
  cfg.seed = 5;
  for (const auto& r : run_suite(cfg)) {
    INFO(to_string(r.id), " rel_err=", r.rel_err);
    CHECK(r.pass());
    CHECK(r.draw.sizes.m == 3);
    CHECK(r.draw.index("alpha") == std::vector<int>{2, 0, 1});
  }
}

TEST_CASE("dependent parameters are solved exactly") {
  const KernelSpec k = plain(KernelVariant::Elliptic);
  Sizes sizes;
  sizes.m = 2;
  sizes.N = 3;
  const ParameterDraw d = sample_parameters(IdentityId::BaileyIA, sizes, k, 11);
  CHECK(d.values("d")[2] == -3.0 * k.delta());
  CHECK(d.balance_residual < 1e-14);
  const auto& a = d.values("a");
  const auto& c = d.values("c");
  const auto& dd = d.values("d");
  cplx total{};
  for (cplx v : a) total += v;
  for (std::size_t i = 0; i < 3; ++i) total += c[i] + dd[i];
  CHECK(std::abs(total - 2.0 * k.delta() - 3.0 * d.scalar("s")) < 1e-14);
  const auto balance = std::find_if(d.dependent.begin(), d.dependent.end(),
                                    [](const DependentValue& v) { return v.balance; });
  REQUIRE(balance != d.dependent.end());
  CHECK(balance->label == "c[3]");
  CHECK(balance->value == c[2]);
}

TEST_CASE("break_balance shifts the dependent value by 1e-3") {
  const KernelSpec k = plain(KernelVariant::Rational);
  Sizes sizes{2, 2, 3, 2, std::nullopt};
  const ParameterDraw good = sample_parameters(IdentityId::DualityPhi, sizes, k, 3);
  const ParameterDraw bad =
      sample_parameters(IdentityId::DualityPhi, sizes, k, 3, true);
  CHECK(bad.balance_broken);
  CHECK(std::abs(bad.values("b")[1] - good.values("b")[1] - 1e-3) < 1e-15);
  CHECK(bad.values("a") == good.values("a"));
  CHECK(bad.balance_residual == doctest::Approx(1e-3));
}

TEST_CASE("negative controls fail once the balance is broken") {
  SuiteConfig cfg;
  cfg.ids = {IdentityId::DualityPhi, IdentityId::EDuality, IdentityId::BaileyIA,
             IdentityId::BaileyIIA};
  cfg.kernels = kAllVariants;
  cfg.m = {1, 2};
  cfg.n = {1, 2};
  cfg.N = {1, 3};
  cfg.trials = 3;
  cfg.seed = 99;
  cfg.break_balance = true;
  for (const auto& r : run_suite(cfg)) {
    INFO(to_string(r.id), " rel_err=", r.rel_err);
    CHECK(r.outcome == Outcome::Fail);
    CHECK(r.draw.balance_broken);
  }
}

TEST_CASE("run_suite is deterministic and independent of jobs") {
  SuiteConfig cfg;
  cfg.ids = {IdentityId::CauchyDet, IdentityId::DualityPhiBe,
             IdentityId::BaileyIIA, IdentityId::EulerTransformation};
  cfg.kernels = kAllVariants;
  cfg.trials = 2;
  cfg.seed = 1234;
  const auto a = run_suite(cfg);
  cfg.jobs = 3;
  const auto b = run_suite(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].draw.seed == b[i].draw.seed);
    CHECK(a[i].draw.kernel == b[i].draw.kernel);
    CHECK(a[i].lhs.mantissa() == b[i].lhs.mantissa());
    CHECK(a[i].lhs.exp2() == b[i].lhs.exp2());
    CHECK(a[i].rhs.mantissa() == b[i].rhs.mantissa());
    CHECK(a[i].rel_err == b[i].rel_err);
  }
  cfg.seed = 1235;
  const auto c = run_suite(cfg);
  CHECK(c.front().lhs.mantissa() != a.front().lhs.mantissa());
}

TEST_CASE("empty identity set gives an empty report") {
  SuiteConfig cfg;
  cfg.kernels = kAllVariants;
  CHECK(run_suite(cfg).empty());
}

TEST_CASE("random gauges stay inside the documented ranges") {
  SuiteConfig cfg;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const KernelSpec k = suite_kernel(cfg, KernelVariant::Elliptic, s);
    CHECK(std::abs(k.gauge().a) <= 0.5);
    CHECK(std::abs(k.gauge().b) <= 0.5);
    CHECK(std::abs(k.gauge().c) >= 0.5);
    CHECK(std::abs(k.gauge().c) <= 2.0);
  }
  cfg.random_gauge = false;
  CHECK(suite_kernel(cfg, KernelVariant::Trigonometric, 7).gauge() == Gauge{});
}

TEST_CASE("documented examples") {
  SUBCASE("duality_phi at (m,n)=(1,1) is tautological") {
    const KernelSpec k = plain(KernelVariant::Trigonometric);
    const auto d = sample_parameters(IdentityId::DualityPhi, {1, 1, 4, 2, {}}, k, 8);
    const auto r = verify_identity(IdentityId::DualityPhi, d, 1e-9);
    CHECK(r.pass());
    CHECK(r.rel_err < 1e-13);
    CHECK(r.note.find("tautological") != std::string::npos);
  }
  SUBCASE("frenkel_turaev_8e7 at N=0") {
    for (auto v : kAllVariants) {
      const auto d = sample_parameters(IdentityId::FrenkelTuraev8e7,
                                       {1, 0, 0, 2, {}}, plain(v), 4);
      const auto r = verify_identity(IdentityId::FrenkelTuraev8e7, d, 1e-12);
      CHECK(r.lhs.to_complex() == cplx(1.0, 0.0));
      CHECK(r.rhs.to_complex() == cplx(1.0, 0.0));
    }
  }
  SUBCASE("cauchy_det, elliptic, M=5, seed=7") {
    const auto d = sample_parameters(IdentityId::CauchyDet, {1, 1, 1, 5, {}},
                                     plain(KernelVariant::Elliptic), 7);
    const auto r = verify_identity(IdentityId::CauchyDet, d, 1e-8);
    CHECK(r.pass());
  }
  SUBCASE("bailey_II_A, m=2, N=3, elliptic, random gauge") {
    SuiteConfig cfg;
    const KernelSpec k = suite_kernel(cfg, KernelVariant::Elliptic, 77);
    CHECK_FALSE(k.gauge() == Gauge{});
    const auto d = sample_parameters(IdentityId::BaileyIIA, {2, 1, 3, 2, {}}, k, 77);
    CHECK(verify_identity(IdentityId::BaileyIIA, d, 1e-7).pass());
  }
}

TEST_CASE("unsuitable requests are rejected") {
  CHECK_THROWS_AS(sample_parameters(IdentityId::EulerTransformation, {},
                                    plain(KernelVariant::Rational), 1),
                  ConstraintViolated);
  CHECK_THROWS_AS(sample_parameters(IdentityId::EPeriodicity, {},
                                    plain(KernelVariant::Trigonometric), 1),
                  ConstraintViolated);
  CHECK_THROWS_AS(sample_parameters(IdentityId::DualityPhi, {1, 0, 2, 2, {}},
                                    plain(KernelVariant::Rational), 1),
                  ConstraintViolated);
  const auto d = sample_parameters(IdentityId::DualityPhi, {},
                                   plain(KernelVariant::Rational), 1);
  CHECK_THROWS_AS(verify_identity(IdentityId::DualityPhiBe, d, 1e-9),
                  ConstraintViolated);
}

TEST_CASE("period shifts have zero total and leave the terminating v alone") {
  const KernelSpec k = plain(KernelVariant::Elliptic);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = sample_parameters(IdentityId::EPeriodicity, {2, 2, 2, 2, {}}, k, seed);
    int total = 0, nonzero = 0;
    for (const char* name : {"l", "p", "q"}) {
      for (int s : d.index(name)) {
        CHECK(std::abs(s) <= 1);
        total += s;
        nonzero += s != 0;
      }
    }
    CHECK(total == 0);
    CHECK(nonzero > 0);
    CHECK(d.index("q").back() == 0);
    CHECK(verify_identity(IdentityId::EPeriodicity, d, 1e-7).pass());
  }
}

TEST_CASE("PtoE followed by EtoP returns the original Phi") {
  // Rewriting Phi^{1+m,n} as E^{m,n+1} and back, with the two prefactors
  // multiplied out independently of the registry evaluators.
  for (auto v : kAllVariants) {
    const KernelSpec k = plain(v);
    const cplx dl = k.delta();
    const int N = 3;
    const cplx a0(0.21, -0.13), x0(-0.32, 0.17);
    const std::vector<cplx> a{{0.11, 0.27}, {-0.41, 0.05}};
    const std::vector<cplx> x{{0.36, -0.22}, {-0.07, 0.39}};
    const std::vector<cplx> b{{0.19, 0.31}};
    const std::vector<cplx> c{{-0.27, -0.14}};
    const ScaledComplex original =
        phi({{a0, a[0], a[1]}, {x0, x[0], x[1]}, b, c, N, k});

    const cplx mN = -double(N) * dl;
    const cplx s = mN - x0;
    const std::vector<cplx> u{a0 - x0, b[0]};
    const std::vector<cplx> vv{mN, (1.0 - N) * dl - x0 - c[0]};
    const ScaledComplex e =
        e_series({a, x, s, u, vv, k, Termination::mode_a(0, N)});

    ScaledComplex to_e = bracket_factorial(k, a0, N) / bracket_factorial(k, dl, N);
    for (std::size_t i = 0; i < a.size(); ++i) {
      to_e *= bracket_factorial(k, x0 - x[i] + a[i], N) /
              bracket_factorial(k, x0 - x[i], N);
    }
    to_e *= bracket_factorial(k, x0 + b[0], N) / bracket_factorial(k, x0 + c[0], N);

    ScaledComplex to_phi =
        bracket_factorial(k, mN, N) / bracket_factorial(k, dl + s - u[0], N);
    for (std::size_t i = 0; i < a.size(); ++i) {
      to_phi *= bracket_factorial(k, dl + s + x[i], N) /
                bracket_factorial(k, dl + s + x[i] - a[i], N);
    }
    to_phi *= bracket_factorial(k, vv[1], N) / bracket_factorial(k, dl + s - u[1], N);

    CHECK(relative_difference(to_e * e, original) < 1e-9);
    const ScaledComplex back =
        to_phi * phi({{mN - s + u[0], a[0], a[1]}, {mN - s, x[0], x[1]}, {u[1]},
                      {dl + s - vv[1]}, N, k});
    CHECK(relative_difference(back, e) < 1e-9);
    CHECK(relative_difference(to_e * back, original) < 1e-9);
    CHECK(relative_difference(to_e * to_phi, ScaledComplex::one()) < 1e-9);
  }
}

TEST_CASE("duality at a_i = -alpha_i delta reproduces ppd_specialized") {
  for (auto v : kAllVariants) {
    const KernelSpec k = plain(v);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = sample_parameters(IdentityId::PpdSpecialized, {2, 2, 3, 2, {}}, k, seed);
      const auto& alpha = p.index("alpha");
      const auto& beta = p.index("beta");
      ParameterDraw d;
      d.id = IdentityId::DualityPhi;
      d.kernel = k;
      d.sizes = p.sizes;
      std::vector<cplx> a, b;
      for (int ai : alpha) a.push_back(-double(ai) * k.delta());
      for (int bk : beta) b.push_back(-double(bk) * k.delta());
      d.params = {{"a", a}, {"x", p.values("x")}, {"b", b}, {"y", p.values("y")}};
      const auto rp = verify_identity(IdentityId::PpdSpecialized, p, 1e-9);
      const auto rd = verify_identity(IdentityId::DualityPhi, d, 1e-9);
      CHECK(rp.pass());
      CHECK(rd.pass());
      CHECK(relative_difference(rp.lhs, rd.lhs) < 1e-12);
      CHECK(relative_difference(rp.rhs, rd.rhs) < 1e-12);
    }
  }
}

TEST_CASE("e_to_phi needs the minus sign in its first denominator") {
  // With [delta+s+u0]_N in place of [delta+s-u0]_N the rewrite fails.
  const KernelSpec k = plain(KernelVariant::Rational);
  const auto d = sample_parameters(IdentityId::EToPhi, {1, 1, 2, 2, {}}, k, 2);
  const auto r = verify_identity(IdentityId::EToPhi, d, 1e-9);
  REQUIRE(r.pass());
  const cplx dl = k.delta(), s = d.scalar("s"), u0 = d.scalar("u0");
  const ScaledComplex swapped =
      r.rhs * bracket_factorial(k, dl + s - u0, 2) / bracket_factorial(k, dl + s + u0, 2);
  CHECK(relative_difference(swapped, r.lhs) > 1e-3);
}

TEST_CASE("ill-conditioned draws are counted") {
  SuiteConfig cfg;
  cfg.ids = {IdentityId::DualityPhi};
  cfg.kernels = {KernelVariant::Trigonometric};
  cfg.m = {1, 3};
  cfg.n = {1, 3};
  cfg.N = {4, 5};
  cfg.trials = 10;
  cfg.seed = 1;
  int redraws = 0;
  for (const auto& r : run_suite(cfg)) {
    CHECK(r.pass());
    CHECK(r.draw.ill_conditioned <= r.draw.resamples);
    redraws += r.draw.ill_conditioned;
  }
  CHECK(redraws > 0);
}
