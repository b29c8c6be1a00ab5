#include "ellhyp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ellhyp/errors.hpp"

namespace ellhyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxNome = 0.9;
constexpr int kThetaMaxTerms = 60;
constexpr double kThetaTailRatio = 1e-17;

cplx I(double v) { return {0.0, v}; }

double nome_modulus(cplx tau) { return std::exp(-kPi * tau.imag()); }

struct Reduced {
  cplx w0;    // reduced argument, w = w0 + n + m tau
  double n;
  double m;
};

// Brings Im(w)/Im(tau) into [-1/2, 1/2) and then Re(w0) into [-1/2, 1/2).
Reduced reduce(cplx w, cplx tau) {
  const double m = std::floor(w.imag() / tau.imag() + 0.5);
  const cplx w1 = w - m * tau;
  const double n = std::floor(w1.real() + 0.5);
  return {w1 - n, n, m};
}

// sin(z) as a ScaledComplex; switches to the exponential form once
// |Im z| is large enough for std::sin to overflow.
ScaledComplex scaled_sin(cplx z) {
  if (std::abs(z.imag()) < 300.0) return ScaledComplex(std::sin(z));
  // sin z = (e^{iz} - e^{-iz}) / 2i; factor out the dominant exponential.
  const cplx dominant = z.imag() > 0 ? -I(1.0) * z : I(1.0) * z;
  const cplx other = -dominant;
  const double sign = z.imag() > 0 ? -1.0 : 1.0;
  const cplx rest = sign * (1.0 - std::exp(other - dominant)) / I(2.0);
  return ScaledComplex::exp(dominant) * ScaledComplex(rest);
}

cplx theta1_series(cplx tau, cplx w0) {
  cplx sum{0.0, 0.0};
  double running_max = 0.0;
  int small_run = 0;
  for (int k = 0; k < kThetaMaxTerms; ++k) {
    const double half = k + 0.5;
    const cplx qpow = std::exp(I(kPi) * tau * (half * half));
    const cplx term = ((k % 2 == 0) ? 2.0 : -2.0) * qpow *
                      std::sin((2.0 * k + 1.0) * kPi * w0);
    sum += term;
    const double mag = std::abs(term);
    running_max = std::max(running_max, mag);
    small_run = (mag <= kThetaTailRatio * running_max) ? small_run + 1 : 0;
    if (small_run >= 3) return sum;
  }
  throw NonConvergent("theta1: series did not converge within 60 terms");
}

void check_tau(cplx tau) {
  if (!(tau.imag() > 0.0)) {
    throw InvalidKernel("theta1: Im(tau) must be positive");
  }
  if (nome_modulus(tau) > kMaxNome) {
    throw InvalidKernel("theta1: nome modulus exceeds 0.9");
  }
}

// The argument of K, scaled so that the zeros of K form a unit lattice.
cplx unit_coordinate(const KernelSpec& spec, cplx x) {
  const cplx y = spec.gauge().c * x;
  return spec.variant() == KernelVariant::Elliptic ? y / spec.omega1() : y;
}

}  // namespace

std::string_view to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::Rational:
      return "rational";
    case KernelVariant::Trigonometric:
      return "trigonometric";
    case KernelVariant::Elliptic:
      return "elliptic";
  }
  return "unknown";
}

std::optional<KernelVariant> parse_variant(std::string_view name) {
  if (name == "rational") return KernelVariant::Rational;
  if (name == "trigonometric" || name == "trig") {
    return KernelVariant::Trigonometric;
  }
  if (name == "elliptic") return KernelVariant::Elliptic;
  return std::nullopt;
}

KernelSpec::KernelSpec() = default;

KernelSpec::KernelSpec(KernelVariant variant, cplx omega1, cplx omega2,
                       Gauge gauge, cplx delta)
    : variant_(variant),
      omega1_(omega1),
      omega2_(omega2),
      gauge_(gauge),
      delta_(delta) {
  validate();
}

KernelSpec KernelSpec::rational(Gauge gauge, cplx delta) {
  return {KernelVariant::Rational, {}, {}, gauge, delta};
}

KernelSpec KernelSpec::trigonometric(Gauge gauge, cplx delta) {
  return {KernelVariant::Trigonometric, {}, {}, gauge, delta};
}

KernelSpec KernelSpec::elliptic(cplx omega1, cplx omega2, Gauge gauge,
                                cplx delta) {
  return {KernelVariant::Elliptic, omega1, omega2, gauge, delta};
}

KernelSpec KernelSpec::with_gauge(const Gauge& gauge) const {
  return {variant_, omega1_, omega2_, gauge, delta_};
}

cplx KernelSpec::period(int k) const {
  if (variant_ != KernelVariant::Elliptic) {
    throw InvalidKernel("period: only the elliptic kernel is doubly periodic");
  }
  return (k == 1 ? omega1_ : omega2_) / gauge_.c;
}

void KernelSpec::validate() {
  if (gauge_.c == cplx(0.0, 0.0)) {
    throw InvalidKernel("gauge constant c must be nonzero");
  }
  if (variant_ == KernelVariant::Elliptic) {
    if (omega1_ == cplx(0.0, 0.0) || omega2_ == cplx(0.0, 0.0)) {
      throw InvalidKernel("elliptic periods must be nonzero");
    }
    if ((omega2_ / omega1_).imag() < 0.0) std::swap(omega1_, omega2_);
    const cplx t = omega2_ / omega1_;
    if (!(t.imag() > 0.0)) {
      throw InvalidKernel("elliptic periods are linearly dependent over R");
    }
    if (nome_modulus(t) > kMaxNome) {
      throw InvalidKernel("nome modulus |exp(i pi omega2/omega1)| exceeds 0.9");
    }
  } else {
    omega1_ = omega2_ = cplx(0.0, 0.0);
  }
  for (int k = 1; k <= kGenericityProbe; ++k) {
    if (zero_distance(*this, static_cast<double>(k) * delta_) <= kPoleEpsilon) {
      throw InvalidKernel("delta is not generic: [" + std::to_string(k) +
                          " delta] vanishes");
    }
  }
}

double zero_distance(const KernelSpec& spec, cplx x) {
  const cplx y = unit_coordinate(spec, x);
  switch (spec.variant()) {
    case KernelVariant::Rational:
      return std::abs(y);
    case KernelVariant::Trigonometric:
      return std::abs(y - std::round(y.real()));
    case KernelVariant::Elliptic: {
      const cplx tau = spec.tau();
      const cplx w0 = reduce(y, tau).w0;
      double best = std::abs(w0);
      for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
          best = std::min(best, std::abs(w0 - (double(i) + double(j) * tau)));
        }
      }
      return best;
    }
  }
  return 0.0;
}

ScaledComplex theta1(cplx tau, cplx z) {
  check_tau(tau);
  const Reduced r = reduce(z / kPi, tau);
  const cplx series = theta1_series(tau, r.w0);
  // theta1(z + n pi + m pi tau) = (-1)^{m+n} q^{-m^2} e^{-2 i m z} theta1(z)
  const double parity = std::fmod(std::abs(r.m + r.n), 2.0);
  const cplx log_mult = I(kPi * parity) - I(kPi) * tau * (r.m * r.m) -
                        I(2.0 * kPi * r.m) * r.w0;
  return ScaledComplex::exp(log_mult) * ScaledComplex(series);
}

ScaledComplex bracket(const KernelSpec& spec, cplx x) {
  const Gauge& g = spec.gauge();
  const cplx y = g.c * x;
  ScaledComplex core;
  switch (spec.variant()) {
    case KernelVariant::Rational:
      core = ScaledComplex(y);
      break;
    case KernelVariant::Trigonometric:
      core = scaled_sin(kPi * y);
      break;
    case KernelVariant::Elliptic:
      core = theta1(spec.tau(), kPi * y / spec.omega1());
      break;
  }
  if (g.a == cplx(0.0, 0.0) && g.b == cplx(0.0, 0.0)) return core;
  return ScaledComplex::exp(g.a * x * x + g.b) * core;
}

ScaledComplex bracket_checked(const KernelSpec& spec, cplx x) {
  if (zero_distance(spec, x) <= kPoleEpsilon) {
    throw PoleHit("denominator bracket vanishes at x = " + format_complex(x));
  }
  ScaledComplex v = bracket(spec, x);
  if (v.is_zero()) {
    throw PoleHit("denominator bracket is exactly zero at x = " +
                  format_complex(x));
  }
  return v;
}

ScaledComplex bracket_factorial(const KernelSpec& spec, cplx x, int k) {
  ScaledComplex acc = ScaledComplex::one();
  for (int j = 0; j < k; ++j) {
    acc *= bracket(spec, x + static_cast<double>(j) * spec.delta());
  }
  return acc;
}

double riemann_residual(const KernelSpec& spec, cplx x, cplx y, cplx u,
                        cplx v) {
  auto br = [&](cplx t) { return bracket(spec, t); };
  const ScaledComplex lhs = br(x + y) * br(x - y) * br(u + v) * br(u - v);
  const ScaledComplex t1 = br(x + u) * br(x - u) * br(y + v) * br(y - v);
  const ScaledComplex t2 = br(x + v) * br(x - v) * br(y + u) * br(y - u);
  const ScaledComplex resid = lhs - t1 + t2;
  if (resid.is_zero()) return 0.0;
  ScaledComplex scale = lhs;
  if (abs_less(scale, t1)) scale = t1;
  if (abs_less(scale, t2)) scale = t2;
  if (scale.is_zero()) return 0.0;
  return std::exp2(resid.log2_abs() - scale.log2_abs());
}

}  // namespace ellhyp
