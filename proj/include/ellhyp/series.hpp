#pragma once

#include <span>
#include <string>
#include <vector>

#include "ellhyp/combinatorics.hpp"
#include "ellhyp/kernel.hpp"
#include "ellhyp/scaled_complex.hpp"

namespace ellhyp {

/// [x]_k with every factor probed as a denominator (throws PoleHit).
ScaledComplex bracket_factorial_checked(const KernelSpec& spec, cplx x, int k);

enum class TerminationMode { A, B };

/// How an E- or W-series terminates.
///  (A) v_k = -N delta (multiplicatively v_k = q^{-N}) for the given k;
///  (B) a_i = -alpha_i delta (a_i = q^{-alpha_i}) for all i.
struct Termination {
  TerminationMode mode = TerminationMode::A;
  int k = 0;  // zero-based index into v, mode A
  int N = 0;
  MultiIndex alpha;  // mode B

  static Termination mode_a(int k, int N) {
    return {TerminationMode::A, k, N, {}};
  }
  static Termination mode_b(MultiIndex alpha) {
    return {TerminationMode::B, 0, 0, std::move(alpha)};
  }
};

struct PhiParams {
  std::vector<cplx> a;
  std::vector<cplx> x;
  std::vector<cplx> b;
  std::vector<cplx> c;
  int N = 0;
  KernelSpec kernel;
};

struct EParams {
  std::vector<cplx> a;
  std::vector<cplx> x;
  cplx s{0.0, 0.0};
  std::vector<cplx> u;
  std::vector<cplx> v;
  KernelSpec kernel;
  Termination termination;
};

/// Bookkeeping filled in by the E/W evaluators.
struct SeriesStats {
  std::size_t terms = 0;
  /// Largest |mu| (mode A) actually summed.
  int truncation = 0;
  std::string note;
  /// max |term| / |sum|; large values mean digits were lost to cancellation.
  double cancellation = 1.0;
};

/// Phi^{m,n}_N: sum over |mu| = N of
///   Delta(x + mu delta)/Delta(x) prod_{i,j} [x_i-x_j+a_j]_{mu_i}/[x_i-x_j+delta]_{mu_i}
///   prod_{i,k} [x_i+b_k]_{mu_i}/[x_i+c_k]_{mu_i}.
ScaledComplex phi(const PhiParams& params, SeriesStats* stats = nullptr);

/// Very-well-poised E^{m,n}; terminates via mode (A) or (B).
/// E^{0,n} is 1 by convention.
ScaledComplex e_series(const EParams& params, SeriesStats* stats = nullptr);

/// Terminating {r+1}E_r(s; args) summed for k = 0..N; one of the args must
/// equal -N delta.
ScaledComplex e_single(cplx s, std::span<const cplx> args,
                       const KernelSpec& kernel, int N,
                       SeriesStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Basic (multiplicative) series.

struct BasicPhiParams {
  cplx q{0.0, 0.0};
  std::vector<cplx> a;
  std::vector<cplx> x;
  std::vector<cplx> b;
  std::vector<cplx> c;
  int N = 0;
};

struct WParams {
  cplx q{0.0, 0.0};
  std::vector<cplx> a;
  std::vector<cplx> x;
  cplx s{1.0, 0.0};
  std::vector<cplx> u;
  std::vector<cplx> v;
  Termination termination;
};

/// (x; q)_k = prod_{j<k} (1 - x q^j).
ScaledComplex qpochhammer(cplx x, cplx q, int k);
/// (x; q)_infinity, truncated once |x q^j| < 1e-17.
ScaledComplex qpochhammer_inf(cplx x, cplx q);

/// Multiple q-series phi^{m,n}_N.
ScaledComplex phi_basic(const BasicPhiParams& params,
                        SeriesStats* stats = nullptr);

/// z = q^n s^n / (a_1...a_m u_1...u_n v_1...v_n).
cplx w_argument(const WParams& params);

/// Very-well-poised multiplicative series W^{m,n}.
ScaledComplex w_series(const WParams& params, SeriesStats* stats = nullptr);

/// sum_N u^N Phi_N (params.N ignored); stops after three consecutive terms
/// below tol * |partial sum|, NonConvergent past N = 200.
ScaledComplex phi_generating(const PhiParams& params, cplx u, double tol);
ScaledComplex phi_basic_generating(const BasicPhiParams& params, cplx u,
                                   double tol);

/// The trigonometric kernel [xi] = e^{i pi xi} - e^{-i pi xi}, under which
/// Phi and E map onto phi and W with x = e^{2 pi i xi}, q = e^{2 pi i delta}.
KernelSpec exponential_trig_kernel(cplx delta);

/// e^{2 pi i xi}.
cplx to_multiplicative(cplx xi);

/// (q c_1..c_n / a_1..a_m b_1..b_n)^{N/2} from the additive parameters, so
/// that Phi^{m,n}_N(alpha; xi | beta; gamma) = prefactor * phi^{m,n}_N.
ScaledComplex phi_to_basic_prefactor(std::span<const cplx> alpha,
                                     std::span<const cplx> beta,
                                     std::span<const cplx> gamma, cplx delta,
                                     int N);

}  // namespace ellhyp
