#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace ellhyp {

using cplx = std::complex<double>;

// Complex number with an extended binary exponent.
//
// The value is mantissa * 2^exp2 with |mantissa| in [1, 2), or exactly zero
// (mantissa = 0, exp2 = 0). Products of a few hundred theta values grow like
// exp(quadratic) and leave the double range long before the sums they feed
// do, so every series in the library accumulates in this type.
class ScaledComplex {
 public:
  constexpr ScaledComplex() = default;
  ScaledComplex(cplx value);  // NOLINT(google-explicit-constructor)
  ScaledComplex(double value) : ScaledComplex(cplx(value, 0.0)) {}  // NOLINT

  static ScaledComplex from_parts(cplx mantissa, std::int64_t exp2);
  /// exp(log_value) without intermediate overflow.
  static ScaledComplex exp(cplx log_value);
  static ScaledComplex one() { return ScaledComplex(cplx(1.0, 0.0)); }

  cplx mantissa() const noexcept { return mantissa_; }
  std::int64_t exp2() const noexcept { return exp2_; }
  bool is_zero() const noexcept { return mantissa_ == cplx(0.0, 0.0); }

  /// Plain complex value; overflows to inf or underflows to 0 outside range.
  cplx to_complex() const;
  bool in_double_range() const noexcept;

  /// log2 |value|; -inf for zero.
  double log2_abs() const;
  /// |value| as a double (may overflow).
  double abs() const;

  ScaledComplex operator-() const;
  ScaledComplex& operator+=(const ScaledComplex& rhs);
  ScaledComplex& operator-=(const ScaledComplex& rhs);
  ScaledComplex& operator*=(const ScaledComplex& rhs);
  ScaledComplex& operator/=(const ScaledComplex& rhs);

  friend ScaledComplex operator+(ScaledComplex lhs, const ScaledComplex& rhs) {
    return lhs += rhs;
  }
  friend ScaledComplex operator-(ScaledComplex lhs, const ScaledComplex& rhs) {
    return lhs -= rhs;
  }
  friend ScaledComplex operator*(ScaledComplex lhs, const ScaledComplex& rhs) {
    return lhs *= rhs;
  }
  friend ScaledComplex operator/(ScaledComplex lhs, const ScaledComplex& rhs) {
    return lhs /= rhs;
  }

  friend bool operator==(const ScaledComplex&, const ScaledComplex&) = default;

  /// "mantissa_re mantissa_im ×2^exp2" with round-trip precision.
  std::string to_string() const;

 private:
  void normalize();

  cplx mantissa_{0.0, 0.0};
  std::int64_t exp2_ = 0;
};

/// Magnitude ordering: exponent first, then mantissa modulus.
bool abs_less(const ScaledComplex& a, const ScaledComplex& b);

/// |a - b| / max(|a|, |b|); 0 when both are zero.
double relative_difference(const ScaledComplex& a, const ScaledComplex& b);

/// Formats a plain complex as "re+imi" (e.g. "1+0i") with round-trip digits.
std::string format_complex(cplx value);

}  // namespace ellhyp
