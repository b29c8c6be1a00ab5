#include "ellhyp/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "ellhyp/errors.hpp"

namespace ellhyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTerminationTol = 1e-9;
constexpr int kGeneratingCap = 200;

using Table = std::vector<ScaledComplex>;

// t[j] = [base]_j for j = 0..len.
Table factorial_table(const KernelSpec& spec, cplx base, int len,
                      bool checked) {
  Table t;
  t.reserve(static_cast<std::size_t>(len) + 1);
  t.push_back(ScaledComplex::one());
  for (int j = 0; j < len; ++j) {
    const cplx arg = base + static_cast<double>(j) * spec.delta();
    t.push_back(t.back() *
                (checked ? bracket_checked(spec, arg) : bracket(spec, arg)));
  }
  return t;
}

ScaledComplex q_factor_checked(cplx y) {
  const cplx f = 1.0 - y;
  if (std::abs(f) <= kPoleEpsilon) {
    throw PoleHit("denominator factor 1 - " + format_complex(y) + " vanishes");
  }
  return ScaledComplex(f);
}

// t[j] = (x; q)_j for j = 0..len.
Table qp_table(cplx x, cplx q, int len, bool checked) {
  Table t;
  t.reserve(static_cast<std::size_t>(len) + 1);
  t.push_back(ScaledComplex::one());
  cplx y = x;
  for (int j = 0; j < len; ++j) {
    t.push_back(t.back() *
                (checked ? q_factor_checked(y) : ScaledComplex(1.0 - y)));
    y *= q;
  }
  return t;
}

void check_difference(cplx a, cplx b) {
  if (std::abs(a - b) <= kPoleEpsilon * std::max(std::abs(a), std::abs(b))) {
    throw PoleHit("coinciding base variables " + format_complex(a) + ", " +
                  format_complex(b));
  }
}

// Integer n in [0, limit) with x = -n delta, if any.
std::optional<int> terminating_length(cplx x, cplx delta, int limit) {
  const cplx t = -x / delta;
  const double n = std::round(t.real());
  if (n < 0 || n >= limit) return std::nullopt;
  if (std::abs(t - n) > kTerminationTol * (1.0 + std::abs(n))) {
    return std::nullopt;
  }
  return static_cast<int>(n);
}

// Same test in multiplicative form: x = q^{-n}.
std::optional<int> terminating_length_q(cplx x, cplx q, int limit) {
  cplx qn{1.0, 0.0};
  for (int n = 0; n < limit; ++n) {
    if (std::abs(x * qn - 1.0) <= kTerminationTol) return n;
    qn *= q;
  }
  return std::nullopt;
}

void require_sizes(std::size_t m, std::size_t other, const char* what) {
  if (m != other) throw LengthMismatch(what);
}

// Summation range common to E and W: either all |mu| <= N or the box.
struct Range {
  bool box = false;
  int N = 0;
  MultiIndex alpha;
};

template <typename Visit>
void for_each_index(std::size_t m, const Range& range, Visit&& visit) {
  if (range.box) {
    BoxIndices box(range.alpha);
    for (auto it = box.begin(); it != box.end(); ++it) visit(*it);
    return;
  }
  for (int w = 0; w <= range.N; ++w) {
    Compositions comps(static_cast<int>(m), w);
    for (auto it = comps.begin(); it != comps.end(); ++it) visit(*it);
  }
}

int max_part(const Range& range, std::size_t i) {
  return range.box ? range.alpha[i] : range.N;
}

int max_weight(const Range& range) {
  return range.box ? range.alpha.weight() : range.N;
}

}  // namespace

ScaledComplex bracket_factorial_checked(const KernelSpec& spec, cplx x,
                                        int k) {
  return factorial_table(spec, x, k, true).back();
}

// ---------------------------------------------------------------------------

namespace {

// Tracks the largest term so callers can see how much a sum cancelled.
class Meter {
 public:
  void add(const ScaledComplex& t) {
    if (!t.is_zero()) max_log2_ = std::max(max_log2_, t.log2_abs());
    ++count_;
  }
  void finish(const ScaledComplex& sum, SeriesStats* stats) const {
    if (stats == nullptr) return;
    stats->terms = count_;
    if (max_log2_ == -std::numeric_limits<double>::infinity()) {
      stats->cancellation = 1.0;
    } else if (sum.is_zero()) {
      stats->cancellation = std::numeric_limits<double>::infinity();
    } else {
      stats->cancellation =
          std::max(1.0, std::exp2(max_log2_ - sum.log2_abs()));
    }
  }

 private:
  double max_log2_ = -std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
};

}  // namespace

ScaledComplex phi(const PhiParams& p, SeriesStats* stats) {
  const std::size_t m = p.x.size();
  const std::size_t n = p.b.size();
  require_sizes(m, p.a.size(), "phi: |a| != |x|");
  require_sizes(n, p.c.size(), "phi: |b| != |c|");
  if (m == 0) throw LengthMismatch("phi: m must be at least 1");
  if (p.N < 0) return ScaledComplex{};
  const KernelSpec& K = p.kernel;
  const cplx d = K.delta();

  ScaledComplex vdm = ScaledComplex::one();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      vdm *= bracket_checked(K, p.x[i] - p.x[j]);
    }
  }

  // ratio[i][j] and bc[i][k] hold prefix ratios of the Pochhammer factors.
  std::vector<std::vector<Table>> ratio(m), bc(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Table num = factorial_table(K, p.x[i] - p.x[j] + p.a[j], p.N, false);
      const Table den = factorial_table(K, p.x[i] - p.x[j] + d, p.N, true);
      for (int l = 0; l <= p.N; ++l) num[l] /= den[l];
      ratio[i].push_back(std::move(num));
    }
    for (std::size_t k = 0; k < n; ++k) {
      Table num = factorial_table(K, p.x[i] + p.b[k], p.N, false);
      const Table den = factorial_table(K, p.x[i] + p.c[k], p.N, true);
      for (int l = 0; l <= p.N; ++l) num[l] /= den[l];
      bc[i].push_back(std::move(num));
    }
  }

  ScaledComplex sum;
  Meter meter;
  Compositions comps(static_cast<int>(m), p.N);
  for (auto it = comps.begin(); it != comps.end(); ++it) {
    const MultiIndex& mu = *it;
    ScaledComplex term = ScaledComplex::one();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        term *= bracket(K, p.x[i] - p.x[j] +
                               static_cast<double>(mu[i] - mu[j]) * d);
      }
    }
    term /= vdm;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) term *= ratio[i][j][mu[i]];
      for (std::size_t k = 0; k < n; ++k) term *= bc[i][k][mu[i]];
    }
    sum += term;
    meter.add(term);
  }
  meter.finish(sum, stats);
  return sum;
}

// ---------------------------------------------------------------------------

ScaledComplex e_series(const EParams& p, SeriesStats* stats) {
  const std::size_t m = p.x.size();
  const std::size_t n = p.u.size();
  require_sizes(m, p.a.size(), "e_series: |a| != |x|");
  require_sizes(n, p.v.size(), "e_series: |u| != |v|");
  const KernelSpec& K = p.kernel;
  const cplx d = K.delta();
  const Termination& term_spec = p.termination;

  Range range;
  std::string note;
  if (term_spec.mode == TerminationMode::A) {
    if (term_spec.k < 0 || static_cast<std::size_t>(term_spec.k) >= n) {
      throw TerminationUnsatisfied("e_series: termination index out of range");
    }
    if (term_spec.N < 0 ||
        terminating_length(p.v[term_spec.k], d, term_spec.N + 1) !=
            term_spec.N) {
      throw TerminationUnsatisfied("e_series: v_" +
                                   std::to_string(term_spec.k + 1) +
                                   " is not -N delta");
    }
    range.N = term_spec.N;
    for (std::size_t k = 0; k < n; ++k) {
      if (static_cast<int>(k) == term_spec.k) continue;
      if (auto len = terminating_length(p.v[k], d, range.N)) {
        range.N = *len;
        note = "v_" + std::to_string(k + 1) + " terminates earlier at N = " +
               std::to_string(*len);
      }
    }
  } else {
    require_sizes(m, term_spec.alpha.size(), "e_series: |alpha| != |x|");
    for (std::size_t i = 0; i < m; ++i) {
      const int ai = term_spec.alpha[i];
      if (ai < 0 || terminating_length(p.a[i], d, ai + 1) != ai) {
        throw TerminationUnsatisfied("e_series: a_" + std::to_string(i + 1) +
                                     " is not -alpha_i delta");
      }
    }
    range.box = true;
    range.alpha = term_spec.alpha;
  }

  if (stats != nullptr) {
    *stats = SeriesStats{};
    stats->truncation = max_weight(range);
    stats->note = note;
  }
  if (m == 0) {
    if (stats != nullptr) stats->terms = 1;
    return ScaledComplex::one();
  }

  const int W = max_weight(range);
  ScaledComplex vdm = ScaledComplex::one();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      vdm *= bracket_checked(K, p.x[i] - p.x[j]);
    }
  }
  std::vector<ScaledComplex> wp_den(m);
  for (std::size_t i = 0; i < m; ++i) {
    wp_den[i] = bracket_checked(K, p.x[i] + p.s);
  }

  // Factors depending on |mu| only.
  Table outer(static_cast<std::size_t>(W) + 1, ScaledComplex::one());
  auto fold_outer = [&](cplx num_base, cplx den_base) {
    const Table num = factorial_table(K, num_base, W, false);
    const Table den = factorial_table(K, den_base, W, true);
    for (int l = 0; l <= W; ++l) outer[l] *= num[l] / den[l];
  };
  for (std::size_t j = 0; j < m; ++j) {
    fold_outer(p.s + p.x[j], d + p.s + p.x[j] - p.a[j]);
  }
  for (std::size_t k = 0; k < n; ++k) fold_outer(p.v[k], d + p.s - p.u[k]);

  // Factors depending on mu_i only.
  std::vector<Table> inner(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int len = max_part(range, i);
    inner[i].assign(static_cast<std::size_t>(len) + 1, ScaledComplex::one());
    auto fold = [&](cplx num_base, cplx den_base) {
      const Table num = factorial_table(K, num_base, len, false);
      const Table den = factorial_table(K, den_base, len, true);
      for (int l = 0; l <= len; ++l) inner[i][l] *= num[l] / den[l];
    };
    for (std::size_t j = 0; j < m; ++j) {
      fold(p.x[i] - p.x[j] + p.a[j], p.x[i] - p.x[j] + d);
    }
    for (std::size_t k = 0; k < n; ++k) {
      fold(p.x[i] + p.u[k], p.x[i] + d + p.s - p.v[k]);
    }
  }

  ScaledComplex sum;
  Meter meter;
  for_each_index(m, range, [&](const MultiIndex& mu) {
    const int w = mu.weight();
    ScaledComplex term = outer[w];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        term *= bracket(K, p.x[i] - p.x[j] +
                               static_cast<double>(mu[i] - mu[j]) * d);
      }
      term *= bracket(K, p.x[i] + p.s + static_cast<double>(w + mu[i]) * d);
      term /= wp_den[i];
      term *= inner[i][mu[i]];
    }
    term /= vdm;
    sum += term;
    meter.add(term);
  });
  meter.finish(sum, stats);
  return sum;
}

ScaledComplex e_single(cplx s, std::span<const cplx> args,
                       const KernelSpec& kernel, int N, SeriesStats* stats) {
  const cplx d = kernel.delta();
  const bool terminates = std::any_of(args.begin(), args.end(), [&](cplx u) {
    return terminating_length(u, d, N + 1) == N;
  });
  if (N < 0 || !terminates) {
    throw TerminationUnsatisfied("e_single: no argument equals -N delta");
  }
  Table acc = factorial_table(kernel, s, N, false);
  const Table dd = factorial_table(kernel, d, N, true);
  for (int l = 0; l <= N; ++l) acc[l] /= dd[l];
  for (cplx u : args) {
    const Table num = factorial_table(kernel, u, N, false);
    const Table den = factorial_table(kernel, d + s - u, N, true);
    for (int l = 0; l <= N; ++l) acc[l] *= num[l] / den[l];
  }
  const ScaledComplex s_den = bracket_checked(kernel, s);
  ScaledComplex sum;
  Meter meter;
  for (int k = 0; k <= N; ++k) {
    const ScaledComplex term = bracket(kernel, s + 2.0 * k * d) / s_den * acc[k];
    sum += term;
    meter.add(term);
  }
  if (stats != nullptr) *stats = SeriesStats{};
  meter.finish(sum, stats);
  return sum;
}

// ---------------------------------------------------------------------------

ScaledComplex qpochhammer(cplx x, cplx q, int k) {
  return qp_table(x, q, k, false).back();
}

ScaledComplex qpochhammer_inf(cplx x, cplx q) {
  if (!(std::abs(q) < 1.0)) {
    throw NonConvergent("qpochhammer_inf: requires |q| < 1");
  }
  ScaledComplex acc = ScaledComplex::one();
  cplx y = x;
  for (int j = 0; j < 100000; ++j) {
    if (std::abs(y) < 1e-17) return acc;
    acc *= ScaledComplex(1.0 - y);
    y *= q;
  }
  throw NonConvergent("qpochhammer_inf: product did not converge");
}

ScaledComplex phi_basic(const BasicPhiParams& p, SeriesStats* stats) {
  const std::size_t m = p.x.size();
  const std::size_t n = p.b.size();
  require_sizes(m, p.a.size(), "phi_basic: |a| != |x|");
  require_sizes(n, p.c.size(), "phi_basic: |b| != |c|");
  if (m == 0) throw LengthMismatch("phi_basic: m must be at least 1");
  if (p.N < 0) return ScaledComplex{};

  std::vector<cplx> qpow(static_cast<std::size_t>(p.N) + 1, 1.0);
  for (int l = 1; l <= p.N; ++l) qpow[l] = qpow[l - 1] * p.q;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) check_difference(p.x[i], p.x[j]);
  }

  std::vector<Table> ratio(m);
  for (std::size_t i = 0; i < m; ++i) {
    ratio[i].assign(static_cast<std::size_t>(p.N) + 1, ScaledComplex::one());
    auto fold = [&](cplx num_base, cplx den_base) {
      const Table num = qp_table(num_base, p.q, p.N, false);
      const Table den = qp_table(den_base, p.q, p.N, true);
      for (int l = 0; l <= p.N; ++l) ratio[i][l] *= num[l] / den[l];
    };
    for (std::size_t j = 0; j < m; ++j) {
      fold(p.a[j] * p.x[i] / p.x[j], p.q * p.x[i] / p.x[j]);
    }
    for (std::size_t k = 0; k < n; ++k) fold(p.b[k] * p.x[i], p.c[k] * p.x[i]);
  }

  ScaledComplex sum;
  Meter meter;
  Compositions comps(static_cast<int>(m), p.N);
  for (auto it = comps.begin(); it != comps.end(); ++it) {
    const MultiIndex& mu = *it;
    ScaledComplex term = ScaledComplex::one();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        term *= ScaledComplex((qpow[mu[i]] * p.x[i] - qpow[mu[j]] * p.x[j]) /
                              (p.x[i] - p.x[j]));
      }
      term *= ratio[i][mu[i]];
    }
    sum += term;
    meter.add(term);
  }
  meter.finish(sum, stats);
  return sum;
}

cplx w_argument(const WParams& p) {
  const auto n = static_cast<int>(p.u.size());
  cplx z = std::pow(p.q * p.s, n);
  for (cplx a : p.a) z /= a;
  for (cplx u : p.u) z /= u;
  for (cplx v : p.v) z /= v;
  return z;
}

ScaledComplex w_series(const WParams& p, SeriesStats* stats) {
  const std::size_t m = p.x.size();
  const std::size_t n = p.u.size();
  require_sizes(m, p.a.size(), "w_series: |a| != |x|");
  require_sizes(n, p.v.size(), "w_series: |u| != |v|");
  const Termination& term_spec = p.termination;

  Range range;
  std::string note;
  if (term_spec.mode == TerminationMode::A) {
    if (term_spec.k < 0 || static_cast<std::size_t>(term_spec.k) >= n) {
      throw TerminationUnsatisfied("w_series: termination index out of range");
    }
    if (term_spec.N < 0 ||
        terminating_length_q(p.v[term_spec.k], p.q, term_spec.N + 1) !=
            term_spec.N) {
      throw TerminationUnsatisfied("w_series: v_" +
                                   std::to_string(term_spec.k + 1) +
                                   " is not q^-N");
    }
    range.N = term_spec.N;
    for (std::size_t k = 0; k < n; ++k) {
      if (static_cast<int>(k) == term_spec.k) continue;
      if (auto len = terminating_length_q(p.v[k], p.q, range.N)) {
        range.N = *len;
        note = "v_" + std::to_string(k + 1) + " terminates earlier at N = " +
               std::to_string(*len);
      }
    }
  } else {
    require_sizes(m, term_spec.alpha.size(), "w_series: |alpha| != |x|");
    for (std::size_t i = 0; i < m; ++i) {
      const int ai = term_spec.alpha[i];
      if (ai < 0 || terminating_length_q(p.a[i], p.q, ai + 1) != ai) {
        throw TerminationUnsatisfied("w_series: a_" + std::to_string(i + 1) +
                                     " is not q^-alpha_i");
      }
    }
    range.box = true;
    range.alpha = term_spec.alpha;
  }
  if (stats != nullptr) {
    *stats = SeriesStats{};
    stats->truncation = max_weight(range);
    stats->note = note;
  }
  if (m == 0) {
    if (stats != nullptr) stats->terms = 1;
    return ScaledComplex::one();
  }

  const int W = max_weight(range);
  const cplx q = p.q;
  const cplx s = p.s;
  std::vector<cplx> qpow(2 * static_cast<std::size_t>(W) + 1, 1.0);
  for (std::size_t l = 1; l < qpow.size(); ++l) qpow[l] = qpow[l - 1] * q;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) check_difference(p.x[i], p.x[j]);
  }
  std::vector<ScaledComplex> wp_den(m);
  for (std::size_t i = 0; i < m; ++i) wp_den[i] = q_factor_checked(s * p.x[i]);

  const ScaledComplex z(w_argument(p));
  Table outer(static_cast<std::size_t>(W) + 1, ScaledComplex::one());
  for (int l = 1; l <= W; ++l) outer[l] = outer[l - 1] * z;
  auto fold_outer = [&](cplx num_base, cplx den_base) {
    const Table num = qp_table(num_base, q, W, false);
    const Table den = qp_table(den_base, q, W, true);
    for (int l = 0; l <= W; ++l) outer[l] *= num[l] / den[l];
  };
  for (std::size_t j = 0; j < m; ++j) {
    fold_outer(s * p.x[j], q * s * p.x[j] / p.a[j]);
  }
  for (std::size_t k = 0; k < n; ++k) fold_outer(p.v[k], q * s / p.u[k]);

  std::vector<Table> inner(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int len = max_part(range, i);
    inner[i].assign(static_cast<std::size_t>(len) + 1, ScaledComplex::one());
    auto fold = [&](cplx num_base, cplx den_base) {
      const Table num = qp_table(num_base, q, len, false);
      const Table den = qp_table(den_base, q, len, true);
      for (int l = 0; l <= len; ++l) inner[i][l] *= num[l] / den[l];
    };
    for (std::size_t j = 0; j < m; ++j) {
      fold(p.a[j] * p.x[i] / p.x[j], q * p.x[i] / p.x[j]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      fold(p.x[i] * p.u[k], q * s * p.x[i] / p.v[k]);
    }
  }

  ScaledComplex sum;
  Meter meter;
  for_each_index(m, range, [&](const MultiIndex& mu) {
    const int w = mu.weight();
    ScaledComplex term = outer[w];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        term *= ScaledComplex((qpow[mu[i]] * p.x[i] - qpow[mu[j]] * p.x[j]) /
                              (p.x[i] - p.x[j]));
      }
      term *= ScaledComplex(1.0 - qpow[w + mu[i]] * s * p.x[i]);
      term /= wp_den[i];
      term *= inner[i][mu[i]];
    }
    sum += term;
    meter.add(term);
  });
  meter.finish(sum, stats);
  return sum;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Evaluate>
ScaledComplex generating_sum(cplx u, double tol, Evaluate&& at) {
  ScaledComplex sum;
  ScaledComplex upow = ScaledComplex::one();
  int small_run = 0;
  for (int N = 0; N <= kGeneratingCap; ++N) {
    const ScaledComplex term = upow * at(N);
    sum += term;
    const bool small = term.is_zero() ||
                       (!sum.is_zero() &&
                        term.log2_abs() < std::log2(tol) + sum.log2_abs());
    small_run = small ? small_run + 1 : 0;
    if (small_run >= 3) return sum;
    upow *= ScaledComplex(u);
  }
  throw NonConvergent("generating series did not converge by N = 200");
}

}  // namespace

ScaledComplex phi_generating(const PhiParams& params, cplx u, double tol) {
  PhiParams p = params;
  return generating_sum(u, tol, [&](int N) {
    p.N = N;
    return phi(p);
  });
}

ScaledComplex phi_basic_generating(const BasicPhiParams& params, cplx u,
                                   double tol) {
  BasicPhiParams p = params;
  return generating_sum(u, tol, [&](int N) {
    p.N = N;
    return phi_basic(p);
  });
}

KernelSpec exponential_trig_kernel(cplx delta) {
  // e^{b} sin(pi xi) with e^{b} = 2i.
  return KernelSpec::trigonometric(
      Gauge{{0.0, 0.0}, {std::log(2.0), kPi / 2.0}, {1.0, 0.0}}, delta);
}

cplx to_multiplicative(cplx xi) { return std::exp(cplx(0.0, 2.0 * kPi) * xi); }

ScaledComplex phi_to_basic_prefactor(std::span<const cplx> alpha,
                                     std::span<const cplx> beta,
                                     std::span<const cplx> gamma, cplx delta,
                                     int N) {
  cplx e = delta;
  for (cplx g : gamma) e += g;
  for (cplx a : alpha) e -= a;
  for (cplx b : beta) e -= b;
  return ScaledComplex::exp(cplx(0.0, kPi * N) * e);
}

}  // namespace ellhyp
