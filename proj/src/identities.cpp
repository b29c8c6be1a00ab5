#include "ellhyp/identities.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "ellhyp/cauchy.hpp"
#include "ellhyp/errors.hpp"
#include "ellhyp/series.hpp"

namespace ellhyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxResamples = 100;
constexpr double kBreakAmount = 1e-3;

using Vec = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Randomness. Uniforms are built from raw 64-bit output so draws are the same
// on every standard library.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    const int v = lo + static_cast<int>(uniform() * (hi - lo + 1));
    return std::min(v, hi);
  }
  cplx polar(double rmin, double rmax) {
    const double r = uniform(rmin, rmax);
    return std::polar(r, uniform(0.0, 2.0 * kPi));
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Small vector helpers.

cplx sum(const Vec& v) { return std::accumulate(v.begin(), v.end(), cplx{}); }

Vec plus(const Vec& v, cplx t) {
  Vec r(v);
  for (auto& e : r) e += t;
  return r;
}

Vec minus(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec neg_plus(cplx t, const Vec& v) {  // t - v
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = t - v[i];
  return r;
}

Vec concat(std::initializer_list<Vec> parts) {
  Vec r;
  for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return r;
}

Vec to_mult(const Vec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_multiplicative(v[i]);
  return r;
}

cplx prod(const Vec& v) {
  return std::accumulate(v.begin(), v.end(), cplx(1.0, 0.0),
                         std::multiplies<>());
}

// ---------------------------------------------------------------------------
// Prefactor accumulators.

struct Fac {
  const KernelSpec& K;
  ScaledComplex value = ScaledComplex::one();
  Fac& num(cplx x, int n) {
    value *= bracket_factorial(K, x, n);
    return *this;
  }
  Fac& den(cplx x, int n) {
    value /= bracket_factorial_checked(K, x, n);
    return *this;
  }
};

ScaledComplex qpoch_checked(cplx x, cplx q, int n) {
  ScaledComplex acc = ScaledComplex::one();
  cplx y = x;
  for (int j = 0; j < n; ++j) {
    const cplx f = 1.0 - y;
    if (std::abs(f) <= kPoleEpsilon) {
      throw PoleHit("denominator q-factor vanishes");
    }
    acc *= ScaledComplex(f);
    y *= q;
  }
  return acc;
}

struct QFac {
  cplx q;
  ScaledComplex value = ScaledComplex::one();
  QFac& num(cplx x, int n) {
    value *= qpochhammer(x, q, n);
    return *this;
  }
  QFac& den(cplx x, int n) {
    value /= qpoch_checked(x, q, n);
    return *this;
  }
};

// ---------------------------------------------------------------------------

struct Sides {
  ScaledComplex lhs;
  ScaledComplex rhs;
  std::string note;
  double cancellation = 1.0;
};

struct Eval {
  const ParameterDraw& d;
  const KernelSpec& K;
  cplx delta;
  std::string note;

  explicit Eval(const ParameterDraw& draw)
      : d(draw), K(draw.kernel), delta(draw.kernel.delta()) {}

  const Vec& v(std::string_view name) const { return d.values(name); }
  cplx s(std::string_view name) const { return d.scalar(name); }
  int N() const { return d.sizes.N; }

  double cancellation = 1.0;

  void record(const SeriesStats& stats) {
    cancellation = std::max(cancellation, stats.cancellation);
    if (!stats.note.empty() && note.find(stats.note) == std::string::npos) {
      if (!note.empty()) note += "; ";
      note += stats.note;
    }
  }

  ScaledComplex E(const Vec& a, const Vec& x, cplx s_, const Vec& u,
                  const Vec& v_, const Termination& t) {
    SeriesStats stats;
    ScaledComplex r = e_series({a, x, s_, u, v_, K, t}, &stats);
    record(stats);
    return r;
  }

  ScaledComplex W(cplx q, const Vec& a, const Vec& x, cplx s_, const Vec& u,
                  const Vec& v_, const Termination& t) {
    SeriesStats stats;
    ScaledComplex r = w_series({q, a, x, s_, u, v_, t}, &stats);
    record(stats);
    return r;
  }

  ScaledComplex Phi(const Vec& a, const Vec& x, const Vec& b, const Vec& c) {
    SeriesStats stats;
    ScaledComplex r = phi({a, x, b, c, N(), K}, &stats);
    record(stats);
    return r;
  }

  ScaledComplex PhiBasic(const BasicPhiParams& params) {
    SeriesStats stats;
    ScaledComplex r = phi_basic(params, &stats);
    record(stats);
    return r;
  }

  ScaledComplex Single(cplx s_, const Vec& args) {
    SeriesStats stats;
    ScaledComplex r = e_single(s_, args, K, N(), &stats);
    record(stats);
    return r;
  }

  Sides done(ScaledComplex lhs, ScaledComplex rhs) {
    return {lhs, rhs, note, cancellation};
  }
};

// ---------------------------------------------------------------------------
// Sampling context.

struct Sampler {
  Rng& rng;
  const KernelSpec& kernel;
  const Sizes& sizes;
  ParameterDraw& draw;
  std::optional<std::pair<std::string, std::size_t>> balance_var;

  // A point of the box Re, Im in [-1, 1] taken in the coordinate c*x of the
  // kernel, mapped onto the period parallelogram for the elliptic kernel.
  cplx box() {
    const double r1 = rng.uniform(-1.0, 1.0);
    const double r2 = rng.uniform(-1.0, 1.0);
    if (kernel.variant() == KernelVariant::Elliptic) {
      return (r1 * kernel.period(1) + r2 * kernel.period(2)) / 2.0;
    }
    return cplx(r1, r2) / kernel.gauge().c;
  }

  Vec& put(const std::string& name, Vec values) {
    draw.params.push_back({name, std::move(values)});
    return draw.params.back().values;
  }

  Vec& free(const std::string& name, int count) {
    Vec v(static_cast<std::size_t>(std::max(count, 0)));
    for (auto& e : v) e = box();
    return put(name, std::move(v));
  }

  cplx& free1(const std::string& name) { return free(name, 1)[0]; }

  Vec& ref(std::string_view name) {
    for (auto& p : draw.params) {
      if (p.name == name) return p.values;
    }
    throw ConstraintViolated("sampler: unknown parameter " + std::string(name));
  }

  // Marks a termination-forced value.
  void terminate(const std::string& name, std::size_t index, cplx value) {
    ref(name)[index] = value;
    draw.dependent.push_back({label(name, index), value, false});
  }

  void balance(const std::string& name, std::size_t index) {
    balance_var = {name, index};
  }

  void indices(const std::string& name, std::vector<int> values) {
    draw.indices.push_back({name, std::move(values)});
  }

  std::string label(const std::string& name, std::size_t index) {
    if (ref(name).size() == 1) return name;
    return name + "[" + std::to_string(index + 1) + "]";
  }

  std::vector<int> random_alpha(int m, int max_part) {
    std::vector<int> a(static_cast<std::size_t>(m));
    for (auto& e : a) e = rng.integer(0, max_part);
    return a;
  }

  // Random composition of total into k parts.
  std::vector<int> random_composition(int total, int k) {
    std::vector<int> c(static_cast<std::size_t>(k), 0);
    for (int j = 0; j < total; ++j) ++c[rng.integer(0, k - 1)];
    return c;
  }
};

using SampleFn = void (*)(Sampler&);
using EvalFn = Sides (*)(const ParameterDraw&);
using BalanceFn = cplx (*)(const ParameterDraw&);

struct Entry {
  IdentityInfo info;
  SampleFn sample;
  EvalFn eval;
  BalanceFn balance;
};

int mode_b_weight(const ParameterDraw& d) {
  const auto& a = d.index("alpha");
  return std::accumulate(a.begin(), a.end(), 0);
}

// ===========================================================================
// Cauchy determinant family.

void sample_cauchy(Sampler& s) {
  s.free1("lambda");
  s.free("z", s.sizes.M);
  s.free("w", s.sizes.M);
}

void sample_cauchy_u(Sampler& s) {
  sample_cauchy(s);
  s.put("u", {s.rng.polar(0.3, 3.0)});
}

CauchyConfig cauchy_config(const ParameterDraw& d) {
  return {d.kernel, d.scalar("lambda"), d.values("z"), d.values("w"), {}};
}

Sides eval_cauchy_det(const ParameterDraw& d) {
  const CauchyConfig cfg = cauchy_config(d);
  Sides sides;
  sides.lhs = cauchy_det_numeric(cfg, &sides.cancellation);
  sides.rhs = cauchy_det_closed(cfg);
  return sides;
}

Sides eval_f_symmetry(const ParameterDraw& d) {
  CauchyConfig cfg = cauchy_config(d);
  cfg.u = d.scalar("u");
  CauchyConfig swapped = cfg;
  std::swap(swapped.z, swapped.w);
  return {f_direct(cfg), f_direct(swapped), {}};
}

Sides eval_f_coefficient(const ParameterDraw& d) {
  const CauchyConfig cfg = cauchy_config(d);
  Sides worst;
  double worst_err = -1.0;
  for (int deg = 0; deg <= static_cast<int>(cfg.z.size()); ++deg) {
    const ScaledComplex zs = f_coefficient(cfg, deg, CoefficientSide::Z);
    const ScaledComplex ws = f_coefficient(cfg, deg, CoefficientSide::W);
    const double err = relative_difference(zs, ws);
    if (err > worst_err) {
      worst_err = err;
      worst = {zs, ws, "worst degree d=" + std::to_string(deg)};
    }
  }
  return worst;
}

// ===========================================================================
// Phi duality family.

void sample_ppd(Sampler& s) {
  const int m = s.sizes.m, n = s.sizes.n;
  s.free("x", m);
  s.free("y", n);
  std::vector<int> alpha;
  if (s.sizes.alpha && static_cast<int>(s.sizes.alpha->size()) == m) {
    const auto p = s.sizes.alpha->parts();
    alpha.assign(p.begin(), p.end());
  } else {
    alpha = s.random_composition(s.rng.integer(0, 5), m);
  }
  const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
  s.indices("alpha", alpha);
  s.indices("beta", s.random_composition(total, n));
}

Sides eval_ppd(const ParameterDraw& d) {
  Eval e(d);
  const Vec &x = e.v("x"), &y = e.v("y");
  const auto &alpha = d.index("alpha"), &beta = d.index("beta");
  Vec ma(x.size()), mb(y.size()), xa(x), yb(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ma[i] = -double(alpha[i]) * e.delta;
    xa[i] += double(alpha[i]) * e.delta;
  }
  for (std::size_t k = 0; k < y.size(); ++k) {
    mb[k] = -double(beta[k]) * e.delta;
    yb[k] += double(beta[k]) * e.delta;
  }
  const ScaledComplex lhs = e.Phi(ma, x, yb, y);
  const ScaledComplex rhs = e.Phi(mb, y, xa, x);
  return e.done(lhs, rhs);
}

void sample_duality(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free("b", s.sizes.n);
  s.free("y", s.sizes.n);
  s.balance("b", static_cast<std::size_t>(s.sizes.n - 1));
}

cplx balance_duality(const ParameterDraw& d) {
  return sum(d.values("a")) - sum(d.values("b"));
}

std::string tautology_note(const ParameterDraw& d) {
  return d.sizes.m == 1 && d.sizes.n == 1 ? "tautological case (m,n)=(1,1)"
                                          : "";
}

Sides eval_duality(const ParameterDraw& d) {
  Eval e(d);
  const Vec &a = e.v("a"), &x = e.v("x"), &b = e.v("b"), &y = e.v("y");
  const ScaledComplex lhs = e.Phi(a, x, minus(y, b), y);
  const ScaledComplex rhs = e.Phi(b, y, minus(x, a), x);
  e.note = tautology_note(d);
  return e.done(lhs, rhs);
}

void sample_tfpp(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free("b", s.sizes.n);
  s.free("c", s.sizes.n);
  s.balance("c", static_cast<std::size_t>(s.sizes.n - 1));
}

cplx balance_tfpp(const ParameterDraw& d) {
  return sum(d.values("a")) + sum(d.values("b")) - sum(d.values("c"));
}

Sides eval_tfpp(const ParameterDraw& d) {
  Eval e(d);
  const Vec &a = e.v("a"), &x = e.v("x"), &b = e.v("b"), &c = e.v("c");
  const ScaledComplex lhs = e.Phi(a, x, b, c);
  const ScaledComplex rhs = e.Phi(minus(c, b), c, minus(x, a), x);
  e.note = tautology_note(d);
  return e.done(lhs, rhs);
}

void sample_be(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free("b", s.sizes.n);
  s.free("y", s.sizes.n);
  s.free1("c");
  s.balance("c", 0);
}

cplx balance_be(const ParameterDraw& d) {
  return sum(d.values("a")) + sum(d.values("b")) -
         double(d.sizes.n) * d.scalar("c");
}

Sides eval_be(const ParameterDraw& d) {
  Eval e(d);
  const Vec &a = e.v("a"), &x = e.v("x"), &b = e.v("b"), &y = e.v("y");
  const cplx c = e.s("c");
  Vec by(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) by[k] = b[k] + y[k];
  Vec cax(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) cax[i] = c - a[i] + x[i];
  const ScaledComplex lhs = e.Phi(a, x, by, plus(y, c));
  const ScaledComplex rhs = e.Phi(neg_plus(c, b), y, cax, plus(x, c));
  e.note = tautology_note(d);
  return e.done(lhs, rhs);
}

Sides eval_duality_basic(const ParameterDraw& d) {
  Eval e(d);
  const cplx q = to_multiplicative(e.delta);
  const Vec A = to_mult(e.v("a")), X = to_mult(e.v("x"));
  const Vec B = to_mult(e.v("b")), Y = to_mult(e.v("y"));
  Vec yb(Y.size()), xa(X.size());
  for (std::size_t k = 0; k < Y.size(); ++k) yb[k] = Y[k] / B[k];
  for (std::size_t i = 0; i < X.size(); ++i) xa[i] = X[i] / A[i];
  const ScaledComplex lhs = e.PhiBasic({q, A, X, yb, Y, e.N()});
  const ScaledComplex rhs = e.PhiBasic({q, B, Y, xa, X, e.N()});
  e.note = tautology_note(d);
  return e.done(lhs, rhs);
}

// ===========================================================================
// Phi <-> E rewrites.

void sample_ptoe(Sampler& s) {
  s.free1("a0");
  s.free1("x0");
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free("b", s.sizes.n);
  s.free("c", s.sizes.n);
}

Sides eval_ptoe(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, a0 = e.s("a0"), x0 = e.s("x0");
  const Vec &a = e.v("a"), &x = e.v("x"), &b = e.v("b"), &c = e.v("c");
  const ScaledComplex lhs =
      e.Phi(concat({{a0}, a}), concat({{x0}, x}), b, c);
  Fac pre{e.K};
  pre.num(a0, N).den(dl, N);
  for (std::size_t i = 0; i < a.size(); ++i) {
    pre.num(x0 - x[i] + a[i], N).den(x0 - x[i], N);
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    pre.num(x0 + b[k], N).den(x0 + c[k], N);
  }
  const cplx mN = -double(N) * dl;
  Vec v{mN};
  for (cplx ck : c) v.push_back((1.0 - N) * dl - x0 - ck);
  const ScaledComplex rhs =
      pre.value * e.E(a, x, mN - x0, concat({{a0 - x0}, b}), v,
                      Termination::mode_a(0, N));
  return e.done(lhs, rhs);
}

void sample_etop(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free1("s");
  s.free1("u0");
  s.free("u", s.sizes.n);
  s.free("v", s.sizes.n);
}

Sides eval_etop(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, s = e.s("s"), u0 = e.s("u0");
  const Vec &a = e.v("a"), &x = e.v("x"), &u = e.v("u"), &v = e.v("v");
  const cplx mN = -double(N) * dl;
  const ScaledComplex lhs = e.E(a, x, s, concat({{u0}, u}), concat({{mN}, v}),
                                Termination::mode_a(0, N));
  Fac pre{e.K};
  pre.num(mN, N).den(dl + s - u0, N);
  for (std::size_t i = 0; i < a.size(); ++i) {
    pre.num(dl + s + x[i], N).den(dl + s + x[i] - a[i], N);
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    pre.num(v[k], N).den(dl + s - u[k], N);
  }
  const ScaledComplex rhs =
      pre.value * e.Phi(concat({{mN - s + u0}, a}), concat({{mN - s}, x}), u,
                       neg_plus(dl + s, v));
  return e.done(lhs, rhs);
}

void sample_phi2n(Sampler& s) {
  s.free1("a0");
  s.free1("a1");
  s.free1("x0");
  s.free1("x1");
  s.free("b", s.sizes.n);
  s.free("c", s.sizes.n);
}

Sides eval_phi2n(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta;
  const cplx a0 = e.s("a0"), a1 = e.s("a1"), x0 = e.s("x0"), x1 = e.s("x1");
  const Vec &b = e.v("b"), &c = e.v("c");
  const ScaledComplex lhs = e.Phi({a0, a1}, {x0, x1}, b, c);
  Fac pre{e.K};
  pre.num(a0, N).num(x0 - x1 + a1, N).den(dl, N).den(x0 - x1, N);
  for (std::size_t k = 0; k < b.size(); ++k) {
    pre.num(x0 + b[k], N).den(x0 + c[k], N);
  }
  const cplx mN = -double(N) * dl;
  Vec args{x1 - x0 + a0, a1};
  for (cplx bk : b) args.push_back(x1 + bk);
  args.push_back(mN);
  for (cplx ck : c) args.push_back((1.0 - N) * dl - x0 - ck);
  const ScaledComplex rhs =
      pre.value * e.Single(x1 - x0 + mN, args);
  return e.done(lhs, rhs);
}

// ===========================================================================
// E-series duality and summations.

void sample_e_duality(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free1("s");
  s.free("c", 2);
  s.free("u", s.sizes.n);
  s.free("d", 2);
  s.free("v", s.sizes.n);
  s.terminate("d", 1, -double(s.sizes.N) * s.kernel.delta());
  s.balance("c", 1);
}

cplx balance_e_duality(const ParameterDraw& d) {
  const double n = double(d.sizes.n);
  const cplx dl = d.kernel.delta();
  return sum(d.values("a")) + sum(d.values("c")) + sum(d.values("d")) +
         sum(d.values("u")) + sum(d.values("v")) - (n + 1.0) * dl -
         (n + 2.0) * d.scalar("s");
}

Sides eval_e_duality(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, s = e.s("s");
  const Vec &a = e.v("a"), &x = e.v("x"), &c = e.v("c"), &u = e.v("u");
  const Vec &dd = e.v("d"), &v = e.v("v");
  const cplx d1 = dd[0], d2 = dd[1];
  const ScaledComplex lhs = e.E(a, x, s, concat({c, u}), concat({dd, v}),
                                Termination::mode_a(1, N));
  Fac pre{e.K};
  for (cplx ck : c) pre.num(dl + s - ck - d1, N).den(dl + s - ck, N);
  for (std::size_t i = 0; i < a.size(); ++i) {
    pre.num(dl + s + x[i], N).num(dl + s + x[i] - a[i] - d1, N);
    pre.den(dl + s + x[i] - a[i], N).den(dl + s + x[i] - d1, N);
  }
  for (std::size_t k = 0; k < u.size(); ++k) {
    pre.num(v[k], N).num(dl + s - u[k] - d1, N);
    pre.den(dl + s - u[k], N).den(v[k] - d1, N);
  }
  Vec b(u.size()), y(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    b[k] = dl + s - u[k] - v[k];
    y[k] = dl + s - v[k];
  }
  const cplx t = d1 + d2 - s - dl;
  Vec z = minus(x, a);
  Vec w = neg_plus(d1 + d2 - s, x);
  const ScaledComplex rhs =
      pre.value * e.E(b, y, t, concat({{-c[0], -c[1]}, z}),
                      concat({{d1, d2}, w}), Termination::mode_a(1, N));
  return e.done(lhs, rhs);
}

void sample_jackson(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free1("s");
  s.free("c", 2);
  s.free("d", 2);
  s.terminate("d", 1, -double(s.sizes.N) * s.kernel.delta());
  s.balance("c", 1);
}

cplx balance_jackson(const ParameterDraw& d) {
  return sum(d.values("a")) + sum(d.values("c")) + sum(d.values("d")) -
         d.kernel.delta() - 2.0 * d.scalar("s");
}

Sides eval_jackson(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, s = e.s("s");
  const Vec &a = e.v("a"), &x = e.v("x"), &c = e.v("c"), &dd = e.v("d");
  const cplx d1 = dd[0];
  const ScaledComplex lhs = e.E(a, x, s, c, dd, Termination::mode_a(1, N));
  Fac rhs{e.K};
  for (cplx ck : c) rhs.num(dl + s - ck - d1, N).den(dl + s - ck, N);
  for (std::size_t i = 0; i < a.size(); ++i) {
    rhs.num(dl + s + x[i], N).num(dl + s + x[i] - a[i] - d1, N);
    rhs.den(dl + s + x[i] - a[i], N).den(dl + s + x[i] - d1, N);
  }
  return e.done(lhs, rhs.value);
}

void sample_ft(Sampler& s) {
  s.free1("s");
  s.free("p", 5);  // a, b, c, d, e
  s.terminate("p", 4, -double(s.sizes.N) * s.kernel.delta());
  s.balance("p", 3);
}

cplx balance_ft(const ParameterDraw& d) {
  return sum(d.values("p")) - d.kernel.delta() - 2.0 * d.scalar("s");
}

Sides eval_ft(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, s = e.s("s");
  const Vec& p = e.v("p");
  const cplx b = p[1], c = p[2], dd = p[3];
  const ScaledComplex lhs = e.Single(s, p);
  Fac rhs{e.K};
  rhs.num(dl + s, N).num(dl + s - b - c, N).num(dl + s - b - dd, N);
  rhs.num(dl + s - c - dd, N);
  rhs.den(dl + s - b, N).den(dl + s - c, N).den(dl + s - dd, N);
  rhs.den(dl + s - b - c - dd, N);
  return e.done(lhs, rhs.value);
}

// E^{m,3} balanced samplers: a, x, s, c0..c2, d0..d2.
void sample_em3(Sampler& s) {
  s.free("a", s.sizes.m);
  s.free("x", s.sizes.m);
  s.free1("s");
  s.free("c", 3);
  s.free("d", 3);
  s.terminate("d", 2, -double(s.sizes.N) * s.kernel.delta());
  s.balance("c", 2);
}

cplx balance_em3(const ParameterDraw& d) {
  return sum(d.values("a")) + sum(d.values("c")) + sum(d.values("d")) -
         2.0 * d.kernel.delta() - 3.0 * d.scalar("s");
}

Sides eval_em3_to_2m8(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, s = e.s("s");
  const Vec &a = e.v("a"), &x = e.v("x"), &c = e.v("c"), &dd = e.v("d");
  const cplx d0 = dd[0], d1 = dd[1], d2 = dd[2];
  const ScaledComplex lhs = e.E(a, x, s, c, dd, Termination::mode_a(2, N));
  Fac pre{e.K};
  pre.num(d0, N).den(d0 - d1, N);
  for (cplx ck : c) pre.num(dl + s - ck - d1, N).den(dl + s - ck, N);
  for (std::size_t i = 0; i < a.size(); ++i) {
    pre.num(dl + s + x[i], N).num(dl + s + x[i] - a[i] - d1, N);
    pre.den(dl + s + x[i] - a[i], N).den(dl + s + x[i] - d1, N);
  }
  const cplx t = d1 + d2 - d0;
  Vec args{d1, d2};
  for (cplx ck : c) args.push_back(dl + s - d0 - ck);
  for (std::size_t i = 0; i < a.size(); ++i) {
    args.push_back(dl + s - d0 + x[i] - a[i]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) args.push_back(d1 + d2 - s - x[i]);
  const ScaledComplex rhs = pre.value * e.Single(t, args);
  return e.done(lhs, rhs);
}

void sample_10e9(Sampler& s) {
  s.free1("s");
  s.free("c", 4);
  s.free("d", 3);
  s.terminate("d", 2, -double(s.sizes.N) * s.kernel.delta());
  s.balance("c", 3);
}

cplx balance_10e9(const ParameterDraw& d) {
  return sum(d.values("c")) + sum(d.values("d")) - 2.0 * d.kernel.delta() -
         3.0 * d.scalar("s");
}

Sides eval_10e9(const ParameterDraw& d) {
  Eval e(d);
  const int N = e.N();
  const cplx dl = e.delta, s = e.s("s");
  const Vec &c = e.v("c"), &dd = e.v("d");
  const cplx d0 = dd[0], d1 = dd[1], d2 = dd[2];
  const ScaledComplex lhs = e.Single(s, concat({c, dd}));
  Fac pre{e.K};
  pre.num(d0, N).num(dl + s, N).den(d0 - d1, N).den(dl + s - d1, N);
  for (cplx ck : c) pre.num(dl + s - ck - d1, N).den(dl + s - ck, N);
  const cplx st = d1 + d2 - d0;
  Vec args;
  for (cplx ck : c) args.push_back(dl + s - d0 - ck);
  args.push_back(d1 + d2 - s);
  args.push_back(d1);
  args.push_back(d2);
  const ScaledComplex rhs = pre.value * e.Single(st, args);
  return e.done(lhs, rhs);
}

// ===========================================================================
// Bailey transformations.

// Mode (B): a_i = -alpha_i delta with d2 free; balance solved for d2.
void sample_em3_b(Sampler& s) {
  std::vector<int> alpha;
  if (s.sizes.alpha) {
    const auto p = s.sizes.alpha->parts();
    alpha.assign(p.begin(), p.end());
  } else {
    alpha = s.random_alpha(s.sizes.m, 3);
  }
  const int m = static_cast<int>(alpha.size());
  s.indices("alpha", alpha);
  s.free("a", m);
  for (int i = 0; i < m; ++i) {
    s.terminate("a", static_cast<std::size_t>(i),
                -double(alpha[static_cast<std::size_t>(i)]) * s.kernel.delta());
  }
  s.free("x", m);
  s.free1("s");
  s.free("c", 3);
  s.free("d", 3);
  s.balance("d", 2);
}

void sample_bailey_w(Sampler& s) {
  if (s.sizes.alpha) {
    sample_em3_b(s);
  } else {
    sample_em3(s);
  }
}

struct BaileyVars {
  Vec a, x, c, d;
  cplx s, dl, abs_a;
};

BaileyVars bailey_vars(const Eval& e) {
  BaileyVars b{e.v("a"), e.v("x"), e.v("c"), e.v("d"), e.s("s"), e.delta, {}};
  b.abs_a = sum(b.a);
  return b;
}

Termination bailey_termination(const ParameterDraw& d) {
  if (d.has_index("alpha")) {
    return Termination::mode_b(MultiIndex(d.index("alpha")));
  }
  return Termination::mode_a(2, d.sizes.N);
}

Sides eval_bailey_I(const ParameterDraw& d) {
  Eval e(d);
  const auto [a, x, c, dd, s, dl, A] = bailey_vars(e);
  const Termination term = bailey_termination(d);
  const cplx st = dl + 2.0 * s - c[2] - dd[0] - dd[1];
  const Vec ct{c[0], c[1], dl + s - dd[0] - dd[1]};
  const Vec dt{dl + s - c[2] - dd[1], dl + s - c[2] - dd[0], dd[2]};
  const ScaledComplex lhs = e.E(a, x, st, ct, dt, term);
  Fac pre{e.K};
  const cplx c01 = c[0] + c[1];
  if (term.mode == TerminationMode::A) {
    const int N = d.sizes.N;
    pre.num(dl + s - c[0], N).num(dl + s - c[1], N);
    pre.den(dl + s - c[0] - A, N).den(dl + s - c[1] - A, N);
    for (std::size_t i = 0; i < a.size(); ++i) {
      pre.num(dl + s + x[i] - a[i], N).num(dl + s - x[i] - c01 - A, N);
      pre.den(dl + s + x[i], N).den(dl + s - x[i] + a[i] - c01 - A, N);
    }
  } else {
    const int w = mode_b_weight(d);
    const auto& alpha = d.index("alpha");
    const cplx d2 = dd[2];
    pre.num(dl + s - c[0], w).num(dl + s - c[1], w);
    pre.den(dl + s - c[0] - d2, w).den(dl + s - c[1] - d2, w);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int ai = alpha[i];
      pre.num(dl + s + x[i] - d2, ai);
      pre.num(dl + s - x[i] + a[i] - A - c01 - d2, ai);
      pre.den(dl + s + x[i], ai).den(dl + s - x[i] + a[i] - A - c01, ai);
    }
  }
  const ScaledComplex rhs = pre.value * e.E(a, x, s, c, dd, term);
  return e.done(lhs, rhs);
}

Sides eval_bailey_II(const ParameterDraw& d) {
  Eval e(d);
  const auto [a, x, c, dd, s, dl, A] = bailey_vars(e);
  const Termination term = bailey_termination(d);
  const cplx st = dl + 2.0 * s - c[0] - c[1] - c[2];
  const Vec ct{dl + s - c[1] - c[2], dl + s - c[0] - c[2],
               dl + s - c[0] - c[1]};
  Vec xt(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) xt[i] = a[i] - x[i] - A;
  const ScaledComplex lhs = e.E(a, xt, st, ct, dd, term);
  Fac pre{e.K};
  const cplx d0 = dd[0], d1 = dd[1], d2 = dd[2];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx y = dl + s + x[i];
    if (term.mode == TerminationMode::A) {
      const int N = d.sizes.N;
      pre.num(y - d0, N).num(y - d1, N).den(y, N).den(y - d0 - d1, N);
      pre.num(y - a[i], N).num(y - a[i] - d0 - d1, N);
      pre.den(y - a[i] - d0, N).den(y - a[i] - d1, N);
    } else {
      const int ai = d.index("alpha")[i];
      pre.num(y - d0, ai).num(y - d1, ai).den(y, ai).den(y - d0 - d1, ai);
      pre.num(y - d2, ai).num(y - d0 - d1 - d2, ai);
      pre.den(y - d0 - d2, ai).den(y - d1 - d2, ai);
    }
  }
  const ScaledComplex rhs = pre.value * e.E(a, x, s, c, dd, term);
  return e.done(lhs, rhs);
}

struct BaileyW {
  Vec a, x, c, d;
  cplx s, q, abs_a;
};

BaileyW bailey_w_vars(const Eval& e) {
  BaileyW b{to_mult(e.v("a")), to_mult(e.v("x")), to_mult(e.v("c")),
            to_mult(e.v("d")), to_multiplicative(e.s("s")),
            to_multiplicative(e.delta), {}};
  b.abs_a = prod(b.a);
  return b;
}

Sides eval_bailey_I_W(const ParameterDraw& d) {
  Eval e(d);
  const auto [a, x, c, dd, s, q, A] = bailey_w_vars(e);
  const Termination term = bailey_termination(d);
  const cplx st = q * s * s / (c[2] * dd[0] * dd[1]);
  const Vec ct{c[0], c[1], q * s / (dd[0] * dd[1])};
  const Vec dt{q * s / (c[2] * dd[1]), q * s / (c[2] * dd[0]), dd[2]};
  const ScaledComplex lhs = e.W(q, a, x, st, ct, dt, term);
  QFac pre{q};
  const cplx c01 = c[0] * c[1];
  if (term.mode == TerminationMode::A) {
    const int N = d.sizes.N;
    pre.num(q * s / c[0], N).num(q * s / c[1], N);
    pre.den(q * s / (c[0] * A), N).den(q * s / (c[1] * A), N);
    for (std::size_t i = 0; i < a.size(); ++i) {
      pre.num(q * s * x[i] / a[i], N).num(q * s / (x[i] * c01 * A), N);
      pre.den(q * s * x[i], N).den(q * s * a[i] / (x[i] * c01 * A), N);
    }
  } else {
    const int w = mode_b_weight(d);
    const auto& alpha = d.index("alpha");
    const cplx d2 = dd[2];
    pre.num(q * s / c[0], w).num(q * s / c[1], w);
    pre.den(q * s / (c[0] * d2), w).den(q * s / (c[1] * d2), w);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int ai = alpha[i];
      pre.num(q * s * x[i] / d2, ai);
      pre.num(q * s * a[i] / (x[i] * A * c01 * d2), ai);
      pre.den(q * s * x[i], ai).den(q * s * a[i] / (x[i] * A * c01), ai);
    }
  }
  const ScaledComplex rhs = pre.value * e.W(q, a, x, s, c, dd, term);
  return e.done(lhs, rhs);
}

Sides eval_bailey_II_W(const ParameterDraw& d) {
  Eval e(d);
  const auto [a, x, c, dd, s, q, A] = bailey_w_vars(e);
  const Termination term = bailey_termination(d);
  const cplx st = q * s * s / (c[0] * c[1] * c[2]);
  const Vec ct{q * s / (c[1] * c[2]), q * s / (c[0] * c[2]),
               q * s / (c[0] * c[1])};
  Vec xt(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) xt[i] = a[i] / (A * x[i]);
  const ScaledComplex lhs = e.W(q, a, xt, st, ct, dd, term);
  QFac pre{q};
  const cplx d0 = dd[0], d1 = dd[1], d2 = dd[2];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx y = q * s * x[i];
    if (term.mode == TerminationMode::A) {
      const int N = d.sizes.N;
      pre.num(y / d0, N).num(y / d1, N).den(y, N).den(y / (d0 * d1), N);
      pre.num(y / a[i], N).num(y / (a[i] * d0 * d1), N);
      pre.den(y / (a[i] * d0), N).den(y / (a[i] * d1), N);
    } else {
      const int ai = d.index("alpha")[i];
      pre.num(y / d0, ai).num(y / d1, ai).den(y, ai).den(y / (d0 * d1), ai);
      pre.num(y / d2, ai).num(y / (d0 * d1 * d2), ai);
      pre.den(y / (d0 * d2), ai).den(y / (d1 * d2), ai);
    }
  }
  const ScaledComplex rhs = pre.value * e.W(q, a, x, s, c, dd, term);
  return e.done(lhs, rhs);
}

// ===========================================================================
// Quasi-periodicity of E and the Euler transformation.

void sample_periodicity(Sampler& s) {
  const int m = s.sizes.m, n = s.sizes.n;
  s.free("a", m);
  s.free("x", m);
  s.free1("s");
  s.free("u", n);
  s.free("v", n);
  s.terminate("v", static_cast<std::size_t>(n - 1),
              -double(s.sizes.N) * s.kernel.delta());
  // Shifts in {-1,0,1} with total zero, not all zero; the terminating v is
  // left alone.
  std::vector<int> l, p, q;
  for (;;) {
    l = std::vector<int>(static_cast<std::size_t>(m));
    p = std::vector<int>(static_cast<std::size_t>(n));
    q = std::vector<int>(static_cast<std::size_t>(n), 0);
    int total = 0, nonzero = 0;
    for (auto& e : l) total += (e = s.rng.integer(-1, 1)), nonzero += e != 0;
    for (auto& e : p) total += (e = s.rng.integer(-1, 1)), nonzero += e != 0;
    for (int k = 0; k + 1 < n; ++k) {
      total += (q[k] = s.rng.integer(-1, 1));
      nonzero += q[k] != 0;
    }
    if (total == 0 && nonzero > 0) break;
  }
  s.indices("l", l);
  s.indices("p", p);
  s.indices("q", q);
  s.indices("omega", {s.rng.integer(1, 2)});
}

Sides eval_periodicity(const ParameterDraw& d) {
  Eval e(d);
  const Vec &a = e.v("a"), &x = e.v("x"), &u = e.v("u"), &v = e.v("v");
  const cplx s = e.s("s");
  const cplx omega = e.K.period(d.index("omega")[0]);
  auto shifted = [&](const Vec& base, std::string_view name) {
    Vec r(base);
    const auto& k = d.index(name);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += double(k[i]) * omega;
    return r;
  };
  const Termination term =
      Termination::mode_a(static_cast<int>(v.size()) - 1, d.sizes.N);
  const ScaledComplex lhs =
      e.E(shifted(a, "l"), x, s, shifted(u, "p"), shifted(v, "q"), term);
  const ScaledComplex rhs = e.E(a, x, s, u, v, term);
  return e.done(lhs, rhs);
}

void sample_euler(Sampler& s) {
  // |q| in [0.2, 0.6]; multiplicative parameters near the unit circle.
  const double im_lo = std::log(1.0 / 0.6) / (2.0 * kPi);
  const double im_hi = std::log(1.0 / 0.2) / (2.0 * kPi);
  s.put("delta", {cplx(s.rng.uniform(0.0, 1.0), s.rng.uniform(im_lo, im_hi))});
  auto near_circle = [&](const std::string& name, int count) {
    Vec v(static_cast<std::size_t>(count));
    for (auto& e : v) {
      e = cplx(s.rng.uniform(-0.5, 0.5), s.rng.uniform(-0.03, 0.03));
    }
    s.put(name, std::move(v));
  };
  near_circle("a", s.sizes.m);
  near_circle("x", s.sizes.m);
  near_circle("b", s.sizes.n);
  near_circle("y", s.sizes.n);
  near_circle("c", 1);
  s.put("u", {s.rng.polar(0.05, 0.4)});
}

Sides eval_euler(const ParameterDraw& d) {
  constexpr double kSeriesTol = 1e-9;
  const cplx q = to_multiplicative(d.scalar("delta"));
  const Vec A = to_mult(d.values("a")), X = to_mult(d.values("x"));
  const Vec B = to_mult(d.values("b")), Y = to_mult(d.values("y"));
  const cplx C = to_multiplicative(d.scalar("c"));
  const cplx u = d.scalar("u");
  const auto n = static_cast<int>(B.size());
  Vec by(B.size()), cy(B.size()), cb(B.size());
  for (std::size_t k = 0; k < B.size(); ++k) {
    by[k] = B[k] * Y[k];
    cy[k] = C * Y[k];
    cb[k] = C / B[k];
  }
  Vec cxa(A.size()), cx(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    cxa[i] = C * X[i] / A[i];
    cx[i] = C * X[i];
  }
  const cplx u2 = prod(A) * prod(B) * u / std::pow(C, n);
  const ScaledComplex lhs =
      phi_basic_generating({q, A, X, by, cy, 0}, u, kSeriesTol);
  const ScaledComplex rhs = qpochhammer_inf(u2, q) / qpochhammer_inf(u, q) *
                            phi_basic_generating({q, cb, Y, cxa, cx, 0}, u2,
                                                 kSeriesTol);
  return {lhs, rhs, {}};
}

// ===========================================================================

constexpr SizeUse kUseM{false, false, false, true, false};
constexpr SizeUse kUseMnN{true, true, true, false, false};
constexpr SizeUse kUsemN{true, false, true, false, false};
constexpr SizeUse kUseN{false, false, true, false, false};
constexpr SizeUse kUsemNalpha{true, false, true, false, true};
constexpr SizeUse kUsemnNalpha{true, true, true, false, true};
constexpr SizeUse kUsemalpha{true, false, false, false, true};
constexpr SizeUse kUsemn{true, true, false, false, false};
constexpr auto kTrig = KernelVariant::Trigonometric;
constexpr auto kEll = KernelVariant::Elliptic;

// clang-format off
const std::array<Entry, 24> kRegistry{{
  {{IdentityId::CauchyDet, "cauchy_det", "Cauchy determinant formula",
    "det([lambda+z_i+w_j]/([lambda][z_i+w_j])) equals its product formula",
    "none", kUseM, 1, 0, std::nullopt, false},
   sample_cauchy, eval_cauchy_det, nullptr},
  {{IdentityId::FSymmetry, "f_symmetry", "symmetric with respect to z and w",
    "F(z|w;u) = F(w|z;u)", "none", kUseM, 1, 0, std::nullopt, false},
   sample_cauchy_u, eval_f_symmetry, nullptr},
  {{IdentityId::FCoefficientD, "f_coefficient_d", "run over all d-subsets",
    "degree-d subset sums over z and over w agree, every d", "none", kUseM,
    1, 0, std::nullopt, false},
   sample_cauchy, eval_f_coefficient, nullptr},
  {{IdentityId::PpdSpecialized, "ppd_specialized",
    "the following identity holds for each d",
    "Phi^{m,n}_d(-alpha delta; x | y+beta delta; y) = Phi^{n,m}_d(-beta delta; y | x+alpha delta; x)",
    "|alpha| = |beta| <= 5", kUseMnN, 1, 1, std::nullopt, false},
   sample_ppd, eval_ppd, nullptr},
  {{IdentityId::DualityPhi, "duality_phi", "the balancing condition",
    "Phi^{m,n}_N(a;x|y-b;y) = Phi^{n,m}_N(b;y|x-a;x)",
    "sum a = sum b (b_n solved)", kUseMnN, 1, 1, std::nullopt, true},
   sample_duality, eval_duality, balance_duality},
  {{IdentityId::DualityPhiTfpp, "duality_phi_tfpp",
    "is equivalent to the transformation formula",
    "Phi^{m,n}_N(a;x|b;c) = Phi^{n,m}_N(c-b;c|x-a;x)",
    "sum a + sum b = sum c (c_n solved)", kUseMnN, 1, 1, std::nullopt, true},
   sample_tfpp, eval_tfpp, balance_tfpp},
  {{IdentityId::DualityPhiBe, "duality_phi_be",
    "under the balancing condition a_1+...+a_m+b_1+...+b_n=nc",
    "Phi^{m,n}_N(a;x|b+y;c+y) = Phi^{n,m}_N(c-b;y|c-a+x;c+x)",
    "sum a + sum b = n c (c solved)", kUseMnN, 1, 1, std::nullopt, true},
   sample_be, eval_be, balance_be},
  {{IdentityId::DualityPhiBasic, "duality_phi_basic",
    "implies the transformation formula",
    "phi^{m,n}_N(a;x|y/b;y) = phi^{n,m}_N(b;y|x/a;x), q = e^{2 pi i delta}",
    "prod a = prod b (b_n solved additively)", kUseMnN, 1, 1, kTrig, true},
   sample_duality, eval_duality_basic, balance_duality},
  {{IdentityId::PhiToE, "phi_to_e", "are related as follows",
    "Phi^{1+m,n}_N = prefactor * E^{m,n+1}(a;x|-N delta-x0;a0-x0,b;-N delta,(1-N)delta-x0-c)",
    "none (m = 0 allowed, E^{0,n+1} = 1)", kUseMnN, 0, 0, std::nullopt, false},
   sample_ptoe, eval_ptoe, nullptr},
  {{IdentityId::EToPhi, "e_to_phi", "are related as follows",
    "E^{m,n+1}(a;x|s;u0,u;-N delta,v) = prefactor * Phi^{1+m,n}_N(-N delta-s+u0,a;-N delta-s,x|u;delta+s-v)",
    "none", kUseMnN, 0, 0, std::nullopt, false},
   sample_etop, eval_etop, nullptr},
  {{IdentityId::Phi2nReduction, "phi2n_reduction",
    "reduces to a very well-poised",
    "Phi^{2,n}_N = prefactor * {2n+6}E_{2n+5}", "none",
    SizeUse{false, true, true, false, false}, 1, 0, std::nullopt, false},
   sample_phi2n, eval_phi2n, nullptr},
  {{IdentityId::EDuality, "e_duality", "under the balancing condition",
    "E^{m,n+2} = prefactor * E^{n,m+2} (dual variables)",
    "sum a + c1+c2+d1+d2 + sum(u+v) = (n+1)delta + (n+2)s; d2 = -N delta (c2 solved)",
    kUseMnN, 1, 0, std::nullopt, true},
   sample_e_duality, eval_e_duality, balance_e_duality},
  {{IdentityId::JacksonSumEm2, "jackson_sum_em2",
    "the following summation formula",
    "E^{m,2}(a;x|s;c1,c2;d1,d2) equals a closed product",
    "sum a + c1+c2+d1+d2 = delta + 2s; d2 = -N delta (c2 solved)", kUsemN, 1,
    0, std::nullopt, true},
   sample_jackson, eval_jackson, balance_jackson},
  {{IdentityId::FrenkelTuraev8e7, "frenkel_turaev_8e7",
    "the Frenkel-Turaev summation formula",
    "8E7(s;a,b,c,d,e) equals a closed product",
    "a+b+c+d+e = delta + 2s; e = -N delta (d solved)", kUseN, 1, 0,
    std::nullopt, true},
   sample_ft, eval_ft, balance_ft},
  {{IdentityId::EM3To2m8, "e_m3_to_2m8",
    "rewriting balanced multiple elliptic",
    "E^{m,3} = prefactor * {2m+8}E_{2m+7}(t; d1,d2,e_k,u_i,v_i)",
    "sum a + sum(c+d) = 2 delta + 3s; d2 = -N delta (c2 solved)", kUsemN, 1,
    0, std::nullopt, true},
   sample_em3, eval_em3_to_2m8, balance_em3},
  {{IdentityId::Bailey10e9, "bailey_10e9",
    "transformation formula for balanced 10E9",
    "10E9(s;c0..c3,d0,d1,d2) = prefactor * 10E9(s~;c~0..c~3,d~0,d1,d2)",
    "sum c + sum d = 2 delta + 3s; d2 = -N delta (c3 solved)", kUseN, 1, 0,
    std::nullopt, true},
   sample_10e9, eval_10e9, balance_10e9},
  {{IdentityId::BaileyIA, "bailey_I_A", "the following identify holds",
    "E^{m,3}(a;x|s~;c0,c1,c~2;d~0,d~1,d2) = prefactor * E^{m,3}(a;x|s;c;d)",
    "sum a + sum(c+d) = 2 delta + 3s; d2 = -N delta (c2 solved)", kUsemN, 1,
    0, std::nullopt, true},
   sample_em3, eval_bailey_I, balance_em3},
  {{IdentityId::BaileyIIA, "bailey_II_A",
    "the following identity holds for d_2=-N delta",
    "E^{m,3}(a;x~|s~;c~;d) = prefactor * E^{m,3}(a;x|s;c;d)",
    "sum a + sum(c+d) = 2 delta + 3s; d2 = -N delta (c2 solved)", kUsemN, 1,
    0, std::nullopt, true},
   sample_em3, eval_bailey_II, balance_em3},
  {{IdentityId::BaileyIB, "bailey_I_B",
    "the following two types of multiple Bailey transformations",
    "type (I) with a_i = -alpha_i delta, d2 free",
    "sum a + sum(c+d) = 2 delta + 3s; a_i = -alpha_i delta (d2 solved)",
    kUsemalpha, 1, 0, std::nullopt, true},
   sample_em3_b, eval_bailey_I, balance_em3},
  {{IdentityId::BaileyIIB, "bailey_II_B",
    "the following two types of multiple Bailey transformations",
    "type (II) with a_i = -alpha_i delta, d2 free",
    "sum a + sum(c+d) = 2 delta + 3s; a_i = -alpha_i delta (d2 solved)",
    kUsemalpha, 1, 0, std::nullopt, true},
   sample_em3_b, eval_bailey_II, balance_em3},
  {{IdentityId::BaileyIW, "bailey_I_W", "two transformation formulas for W^{m,3}",
    "type (I) for W^{m,3} in multiplicative variables",
    "prod a * prod(c d) = q^2 s^3; d2 = q^-N, or a_i = q^-alpha_i with --alpha",
    kUsemNalpha, 1, 0, kTrig, true},
   sample_bailey_w, eval_bailey_I_W, balance_em3},
  {{IdentityId::BaileyIIW, "bailey_II_W", "two transformation formulas for W^{m,3}",
    "type (II) for W^{m,3} in multiplicative variables",
    "prod a * prod(c d) = q^2 s^3; d2 = q^-N, or a_i = q^-alpha_i with --alpha",
    kUsemNalpha, 1, 0, kTrig, true},
   sample_bailey_w, eval_bailey_II_W, balance_em3},
  {{IdentityId::EPeriodicity, "e_periodicity",
    "quasi-periodic with respect to a period",
    "E(a+l w;x|s;u+p w;v+q w) = E(a;x|s;u;v), w a period",
    "|l|+|p|+|q| = 0 (signed sum); terminating v unshifted",
    kUsemnNalpha, 1, 1, kEll, false},
   sample_periodicity, eval_periodicity, nullptr},
  {{IdentityId::EulerTransformation, "euler_transformation",
    "Euler transformation formula",
    "sum_N u^N phi_N(a;x|by;cy) = ratio of (.;q)_inf * sum_N u'^N phi^{n,m}_N(c/b;y|cx/a;cx)",
    "none; |q| in [0.2,0.6], |u| in [0.05,0.4]", kUsemn, 1, 1, kTrig, false},
   sample_euler, eval_euler, nullptr},
}};
// clang-format on

const Entry& entry(IdentityId id) {
  return kRegistry[static_cast<std::size_t>(id)];
}

struct Attempt {
  ParameterDraw draw;
  Sides sides;
};

void solve_balance(const Entry& e, Sampler& s) {
  if (!s.balance_var) return;
  auto& slot = s.ref(s.balance_var->first)[s.balance_var->second];
  slot = 0.0;
  const cplx r0 = e.balance(s.draw);
  slot = 1.0;
  const cplx r1 = e.balance(s.draw);
  slot = -r0 / (r1 - r0);
  s.draw.dependent.push_back(
      {s.label(s.balance_var->first, s.balance_var->second), slot, true});
}

void check_sizes(const IdentityInfo& info, const Sizes& sizes,
                 const KernelSpec& kernel) {
  if (!identity_applies(info.id, kernel.variant())) {
    throw ConstraintViolated(std::string(info.name) + ": not defined for the " +
                             std::string(to_string(kernel.variant())) +
                             " kernel");
  }
  if (info.uses.m && sizes.m < info.min_m && !(info.uses.alpha && sizes.alpha)) {
    throw ConstraintViolated(std::string(info.name) + ": m must be at least " +
                             std::to_string(info.min_m));
  }
  if (info.uses.n && sizes.n < info.min_n) {
    throw ConstraintViolated(std::string(info.name) + ": n must be at least " +
                             std::to_string(info.min_n));
  }
  if (info.uses.N && sizes.N < 0) {
    throw ConstraintViolated(std::string(info.name) + ": N must be >= 0");
  }
  if (info.uses.M && sizes.M < 1) {
    throw ConstraintViolated(std::string(info.name) + ": M must be >= 1");
  }
  if (info.uses.alpha && sizes.alpha) {
    for (int a : sizes.alpha->parts()) {
      if (a < 0) throw ConstraintViolated("alpha entries must be >= 0");
    }
  }
}

Attempt sample_and_evaluate(IdentityId id, const Sizes& sizes,
                            const KernelSpec& kernel, std::uint64_t seed,
                            bool break_balance) {
  const Entry& e = entry(id);
  check_sizes(e.info, sizes, kernel);
  std::string last_error = "no attempt";
  int ill_conditioned = 0;
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    ParameterDraw draw;
    draw.id = id;
    draw.kernel = kernel;
    draw.sizes = sizes;
    draw.seed = seed;
    draw.resamples = attempt;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    Sampler s{rng, kernel, sizes, draw, std::nullopt};
    e.sample(s);
    if (e.balance != nullptr) {
      solve_balance(e, s);
      if (break_balance) {
        s.ref(s.balance_var->first)[s.balance_var->second] += kBreakAmount;
        draw.dependent.back().value += kBreakAmount;
        draw.balance_broken = true;
      }
      draw.balance_residual = std::abs(e.balance(draw));
    }
    if (draw.has_index("alpha")) {
      draw.sizes.alpha = MultiIndex(draw.index("alpha"));
      draw.sizes.m = static_cast<int>(draw.index("alpha").size());
    }
    draw.ill_conditioned = ill_conditioned;
    try {
      Sides sides = e.eval(draw);
      if (sides.lhs.is_zero() && sides.rhs.is_zero()) {
        last_error = "both sides vanish";
        continue;
      }
      if (!(sides.cancellation <= kMaxCancellation)) {
        ++ill_conditioned;
        last_error = "cancellation " + std::to_string(sides.cancellation);
        continue;
      }
      return {std::move(draw), std::move(sides)};
    } catch (const PoleHit& err) {
      last_error = err.what();
    }
  }
  throw SamplingExhausted(std::string(e.info.name) +
                          ": no usable draw after 100 resamples (" +
                          last_error + ")");
}

VerificationReport make_report(IdentityId id, ParameterDraw draw, Sides sides,
                               double tol) {
  VerificationReport r;
  r.id = id;
  r.draw = std::move(draw);
  r.lhs = sides.lhs;
  r.rhs = sides.rhs;
  r.note = std::move(sides.note);
  r.cancellation = sides.cancellation;
  r.tolerance = tol;
  if (r.lhs.is_zero() && r.rhs.is_zero()) {
    r.outcome = Outcome::Inconclusive;
    if (!r.note.empty()) r.note += "; ";
    r.note += "both sides vanish";
    return r;
  }
  r.rel_err = relative_difference(r.lhs, r.rhs);
  r.outcome = r.rel_err < tol ? Outcome::Pass : Outcome::Fail;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<cplx>& ParameterDraw::values(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.values;
  }
  throw ConstraintViolated("draw has no parameter " + std::string(name));
}

cplx ParameterDraw::scalar(std::string_view name) const {
  const auto& v = values(name);
  if (v.size() != 1) {
    throw ConstraintViolated("parameter " + std::string(name) +
                             " is not a scalar");
  }
  return v[0];
}

const std::vector<int>& ParameterDraw::index(std::string_view name) const {
  for (const auto& p : indices) {
    if (p.name == name) return p.values;
  }
  throw ConstraintViolated("draw has no index " + std::string(name));
}

bool ParameterDraw::has_index(std::string_view name) const {
  return std::any_of(indices.begin(), indices.end(),
                     [&](const NamedIndices& p) { return p.name == name; });
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    case Outcome::Inconclusive:
      return "inconclusive";
    case Outcome::Error:
      return "error";
  }
  return "unknown";
}

std::span<const IdentityInfo> list_identities() {
  static const std::vector<IdentityInfo> infos = [] {
    std::vector<IdentityInfo> v;
    for (const auto& e : kRegistry) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const IdentityInfo& identity_info(IdentityId id) { return entry(id).info; }

std::optional<IdentityId> parse_identity(std::string_view name) {
  for (const auto& e : kRegistry) {
    if (e.info.name == name) return e.info.id;
  }
  return std::nullopt;
}

std::string_view to_string(IdentityId id) { return entry(id).info.name; }

bool identity_applies(IdentityId id, KernelVariant variant) {
  const auto& only = entry(id).info.only_kernel;
  return !only || *only == variant;
}

double default_tolerance(IdentityId id, KernelVariant variant) {
  if (id == IdentityId::EulerTransformation) return 1e-6;
  return variant == KernelVariant::Elliptic ? 1e-7 : 1e-9;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t component) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (component + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ParameterDraw sample_parameters(IdentityId id, const Sizes& sizes,
                                const KernelSpec& kernel, std::uint64_t seed,
                                bool break_balance) {
  return sample_and_evaluate(id, sizes, kernel, seed, break_balance).draw;
}

VerificationReport verify_identity(IdentityId id, const ParameterDraw& draw,
                                   double tol) {
  if (draw.id != id) {
    throw ConstraintViolated("verify_identity: draw belongs to " +
                             std::string(to_string(draw.id)));
  }
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  try {
    r = make_report(id, draw, entry(id).eval(draw), tol);
  } catch (const PoleHit& err) {
    r.id = id;
    r.draw = draw;
    r.tolerance = tol;
    r.outcome = Outcome::Inconclusive;
    r.note = err.what();
  }
  r.wall_time = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return r;
}

KernelSpec suite_kernel(const SuiteConfig& config, KernelVariant variant,
                        std::uint64_t seed) {
  auto build = [&](const Gauge& g) {
    switch (variant) {
      case KernelVariant::Rational:
        return KernelSpec::rational(g);
      case KernelVariant::Trigonometric:
        return KernelSpec::trigonometric(g);
      case KernelVariant::Elliptic:
        return KernelSpec::elliptic(config.omega1, config.omega2, g);
    }
    return KernelSpec();
  };
  if (!config.random_gauge) return build({});
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const Gauge g{rng.polar(0.0, 0.5), rng.polar(0.0, 0.5), rng.polar(0.5, 2.0)};
    try {
      return build(g);
    } catch (const InvalidKernel&) {
      // delta not generic for this scaling; draw again
    }
  }
  throw SamplingExhausted("no admissible random gauge");
}

std::vector<VerificationReport> run_suite(const SuiteConfig& config) {
  struct Case {
    IdentityId id;
    KernelVariant variant;
    Sizes sizes;
    std::uint64_t seed;
  };
  std::vector<Case> cases;
  auto range = [](bool used, IntRange r) {
    return used ? r : IntRange{r.lo, r.lo};
  };
  for (IdentityId id : config.ids) {
    const IdentityInfo& info = identity_info(id);
    for (KernelVariant variant : config.kernels) {
      if (!identity_applies(id, variant)) continue;
      const IntRange mr = range(info.uses.m && !(info.uses.alpha && config.alpha),
                                config.m);
      const IntRange nr = range(info.uses.n, config.n);
      const IntRange Nr = range(info.uses.N, config.N);
      const IntRange Mr = range(info.uses.M, config.M);
      for (int m = mr.lo; m <= mr.hi; ++m) {
        if (info.uses.m && m < info.min_m && !(info.uses.alpha && config.alpha)) {
          continue;
        }
        for (int n = nr.lo; n <= nr.hi; ++n) {
          if (info.uses.n && n < info.min_n) continue;
          for (int N = Nr.lo; N <= Nr.hi; ++N) {
            for (int M = Mr.lo; M <= Mr.hi; ++M) {
              for (int trial = 0; trial < config.trials; ++trial) {
                Sizes sizes{m, n, N, M, config.alpha};
                if (info.uses.alpha && config.alpha) {
                  sizes.m = static_cast<int>(config.alpha->size());
                }
                std::uint64_t h = mix_seed(config.seed, static_cast<std::uint64_t>(id));
                for (std::uint64_t part :
                     {static_cast<std::uint64_t>(variant),
                      static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(M),
                      static_cast<std::uint64_t>(trial)}) {
                  h = mix_seed(h, part);
                }
                cases.push_back({id, variant, sizes, h});
              }
            }
          }
        }
      }
    }
  }

  std::vector<VerificationReport> reports(cases.size());
  auto run_case = [&](std::size_t i) {
    const Case& c = cases[i];
    const double tol =
        config.tol.value_or(default_tolerance(c.id, c.variant));
    const auto start = std::chrono::steady_clock::now();
    VerificationReport r;
    r.id = c.id;
    r.tolerance = tol;
    r.draw.id = c.id;
    r.draw.sizes = c.sizes;
    r.draw.seed = c.seed;
    try {
      const KernelSpec kernel =
          suite_kernel(config, c.variant, mix_seed(c.seed, 0x6a09e667ULL));
      r.draw.kernel = kernel;
      Attempt a = sample_and_evaluate(c.id, c.sizes, kernel, c.seed,
                                      config.break_balance);
      r = make_report(c.id, std::move(a.draw), std::move(a.sides), tol);
    } catch (const SamplingExhausted& err) {
      r.outcome = Outcome::Inconclusive;
      r.note = err.what();
    } catch (const std::exception& err) {
      r.outcome = Outcome::Error;
      r.note = err.what();
    }
    r.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    reports[i] = std::move(r);
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1 || cases.size() < 2) {
    for (std::size_t i = 0; i < cases.size(); ++i) run_case(i);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cases.size(); i = next++) run_case(i);
    });
  }
  for (auto& th : pool) th.join();
  return reports;
}

}  // namespace ellhyp
