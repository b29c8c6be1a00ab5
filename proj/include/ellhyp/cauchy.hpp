#pragma once

#include <vector>

#include "ellhyp/kernel.hpp"
#include "ellhyp/scaled_complex.hpp"

namespace ellhyp {

struct CauchyConfig {
  KernelSpec kernel;
  cplx lambda{0.0, 0.0};
  std::vector<cplx> z;
  std::vector<cplx> w;
  cplx u{0.0, 0.0};
};

enum class CoefficientSide { Z, W };

/// Determinant of a row-major n x n matrix by LU with partial pivoting.
/// Throws SingularMatrix when a pivot column is entirely zero.
ScaledComplex lu_determinant(std::vector<ScaledComplex> matrix, std::size_t n);

/// det([lambda+z_i+w_j] / ([lambda][z_i+w_j])) evaluated numerically.
/// `cancellation`, when given, receives prod_i max_j |A_ij| / |det A|, a
/// Hadamard-type measure of the digits lost in the elimination.
ScaledComplex cauchy_det_numeric(const CauchyConfig& cfg,
                                 double* cancellation = nullptr);

/// [lambda+|z|+|w|] Delta(z) Delta(w) / ([lambda] prod_{i,j} [z_i+w_j]).
ScaledComplex cauchy_det_closed(const CauchyConfig& cfg);

/// F(z|w;u) as the sum over all subsets K of {1..M}.
ScaledComplex f_direct(const CauchyConfig& cfg);

/// F(z|w;u) = det(A + u A_delta) / cauchy_det_closed, where A_delta is A
/// with every z_i shifted by delta.
ScaledComplex f_operator(const CauchyConfig& cfg);

/// Degree-d coefficient of F without its lambda factor:
///   sum_{|K|=d} prod_{i in K, j not in K} [z_i-z_j+delta]/[z_i-z_j]
///               prod_{i in K, k} [z_i+w_k]/[z_i+w_k+delta],
/// with z and w exchanged on the W side. cfg.u is ignored.
ScaledComplex f_coefficient(const CauchyConfig& cfg, int d,
                            CoefficientSide side);

}  // namespace ellhyp
