#include "ellhyp/scaled_complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace ellhyp {

namespace {

// Beyond this exponent gap the smaller addend cannot change the mantissa.
constexpr std::int64_t kAlignLimit = 64;

cplx ldexp_c(cplx v, int e) {
  return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
}

}  // namespace

ScaledComplex::ScaledComplex(cplx value) : mantissa_(value) { normalize(); }

ScaledComplex ScaledComplex::from_parts(cplx mantissa, std::int64_t exp2) {
  ScaledComplex r;
  r.mantissa_ = mantissa;
  r.exp2_ = exp2;
  r.normalize();
  return r;
}

ScaledComplex ScaledComplex::exp(cplx log_value) {
  const double re = log_value.real();
  const double k = std::floor(re / std::numbers::ln2);
  const double frac = re - k * std::numbers::ln2;
  const double mag = std::exp(frac);
  ScaledComplex r;
  r.mantissa_ = std::polar(mag, log_value.imag());
  r.exp2_ = static_cast<std::int64_t>(k);
  r.normalize();
  return r;
}

void ScaledComplex::normalize() {
  if (mantissa_ == cplx(0.0, 0.0)) {
    exp2_ = 0;
    return;
  }
  const double mag = std::abs(mantissa_);
  if (!std::isfinite(mag)) {
    // Leave non-finite values visible rather than silently rescaling them.
    return;
  }
  int e = 0;
  std::frexp(mag, &e);  // mag = f * 2^e, f in [0.5, 1)
  mantissa_ = ldexp_c(mantissa_, 1 - e);
  exp2_ += e - 1;
  // hypot rounding can leave the modulus a hair outside [1, 2).
  const double m = std::abs(mantissa_);
  if (m >= 2.0) {
    mantissa_ *= 0.5;
    ++exp2_;
  } else if (m < 1.0) {
    mantissa_ *= 2.0;
    --exp2_;
  }
}

cplx ScaledComplex::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  constexpr std::int64_t lo = std::numeric_limits<int>::min() / 2;
  constexpr std::int64_t hi = std::numeric_limits<int>::max() / 2;
  const int e = static_cast<int>(std::clamp(exp2_, lo, hi));
  return ldexp_c(mantissa_, e);
}

bool ScaledComplex::in_double_range() const noexcept {
  return is_zero() || (exp2_ > -1020 && exp2_ < 1023);
}

double ScaledComplex::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(exp2_) + std::log2(std::abs(mantissa_));
}

double ScaledComplex::abs() const { return std::abs(to_complex()); }

ScaledComplex ScaledComplex::operator-() const {
  ScaledComplex r = *this;
  r.mantissa_ = -r.mantissa_;
  return r;
}

ScaledComplex& ScaledComplex::operator+=(const ScaledComplex& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  const std::int64_t gap = exp2_ - rhs.exp2_;
  if (gap > kAlignLimit) return *this;
  if (gap < -kAlignLimit) return *this = rhs;
  if (gap >= 0) {
    mantissa_ += ldexp_c(rhs.mantissa_, static_cast<int>(-gap));
  } else {
    mantissa_ = ldexp_c(mantissa_, static_cast<int>(gap)) + rhs.mantissa_;
    exp2_ = rhs.exp2_;
  }
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator-=(const ScaledComplex& rhs) {
  return *this += -rhs;
}

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& rhs) {
  if (is_zero() || rhs.is_zero()) return *this = ScaledComplex();
  mantissa_ *= rhs.mantissa_;
  exp2_ += rhs.exp2_;
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& rhs) {
  if (rhs.is_zero()) {
    mantissa_ /= cplx(0.0, 0.0);
    return *this;
  }
  if (is_zero()) return *this;
  mantissa_ /= rhs.mantissa_;
  exp2_ -= rhs.exp2_;
  normalize();
  return *this;
}

std::string ScaledComplex::to_string() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g %.17g ×2^%lld", mantissa_.real(),
                mantissa_.imag(), static_cast<long long>(exp2_));
  return buf;
}

bool abs_less(const ScaledComplex& a, const ScaledComplex& b) {
  if (b.is_zero()) return false;
  if (a.is_zero()) return true;
  if (a.exp2() != b.exp2()) return a.exp2() < b.exp2();
  return std::abs(a.mantissa()) < std::abs(b.mantissa());
}

double relative_difference(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  const ScaledComplex diff = a - b;
  if (diff.is_zero()) return 0.0;
  const ScaledComplex& big = abs_less(a, b) ? b : a;
  return std::exp2(diff.log2_abs() - big.log2_abs());
}

std::string format_complex(cplx value) {
  char buf[96];
  const double im = value.imag();
  std::snprintf(buf, sizeof buf, "%.17g%s%.17gi", value.real(),
                (std::signbit(im) || std::isnan(im)) ? "" : "+", im);
  return buf;
}

}  // namespace ellhyp
