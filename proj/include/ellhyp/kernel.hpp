#pragma once

#include <optional>
#include <string_view>

#include "ellhyp/scaled_complex.hpp"

namespace ellhyp {

enum class KernelVariant { Rational, Trigonometric, Elliptic };

std::string_view to_string(KernelVariant v);
std::optional<KernelVariant> parse_variant(std::string_view name);

/// Gauge constants of the transformation e^{a x^2 + b} [c x].
struct Gauge {
  cplx a{0.0, 0.0};
  cplx b{0.0, 0.0};
  cplx c{1.0, 0.0};

  friend bool operator==(const Gauge&, const Gauge&) = default;
};

/// Pole tolerance, measured in the coordinate where the kernel zeros form a
/// unit lattice (c*x, or c*x/omega1 for the elliptic kernel).
inline constexpr double kPoleEpsilon = 1e-6;
inline constexpr int kGenericityProbe = 64;

// Immutable description of the odd function [x] and the shift step delta.
//
// Rational:      K(y) = y
// Trigonometric: K(y) = sin(pi y)
// Elliptic:      K(y) = theta1(pi y / omega1 | omega2 / omega1)
//
// and [x] = e^{a x^2 + b} K(c x). The elliptic choice is gauge-equivalent to
// the Weierstrass sigma function for the lattice Z omega1 + Z omega2.
class KernelSpec {
 public:
  /// Rational kernel, delta = 1, trivial gauge.
  KernelSpec();

  static KernelSpec rational(Gauge gauge = {}, cplx delta = {1.0, 0.0});
  static KernelSpec trigonometric(Gauge gauge = {},
                                  cplx delta = default_delta());
  static KernelSpec elliptic(cplx omega1, cplx omega2, Gauge gauge = {},
                             cplx delta = default_delta());

  static cplx default_delta() { return {0.311, 0.173}; }

  KernelVariant variant() const noexcept { return variant_; }
  cplx omega1() const noexcept { return omega1_; }
  cplx omega2() const noexcept { return omega2_; }
  /// omega2 / omega1, with Im(tau) > 0.
  cplx tau() const noexcept { return omega2_ / omega1_; }
  const Gauge& gauge() const noexcept { return gauge_; }
  cplx delta() const noexcept { return delta_; }

  /// Same kernel with a different gauge (re-validated).
  KernelSpec with_gauge(const Gauge& gauge) const;

  /// Quasi-periods of [x] itself (omega_k / c); elliptic only.
  cplx period(int k) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(KernelVariant variant, cplx omega1, cplx omega2, Gauge gauge,
             cplx delta);
  void validate();

  KernelVariant variant_ = KernelVariant::Rational;
  cplx omega1_{0.0, 0.0};
  cplx omega2_{0.0, 0.0};
  Gauge gauge_{};
  cplx delta_{1.0, 0.0};
};

/// [x] = e^{a x^2 + b} K(c x).
ScaledComplex bracket(const KernelSpec& spec, cplx x);

/// [x] for use as a denominator: throws PoleHit within kPoleEpsilon of a zero.
ScaledComplex bracket_checked(const KernelSpec& spec, cplx x);

/// Distance from x to the zero set of [x], in unit-lattice coordinates.
double zero_distance(const KernelSpec& spec, cplx x);

/// [x]_k = [x][x+delta]...[x+(k-1)delta]; k = 0 gives exactly 1.
ScaledComplex bracket_factorial(const KernelSpec& spec, cplx x, int k);

/// |LHS - RHS| / max term of the three-term Riemann relation.
double riemann_residual(const KernelSpec& spec, cplx x, cplx y, cplx u,
                        cplx v);

/// Odd Jacobi theta function theta1(z | tau) with lattice argument reduction.
ScaledComplex theta1(cplx tau, cplx z);

}  // namespace ellhyp
