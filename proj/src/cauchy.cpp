#include "ellhyp/cauchy.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "ellhyp/combinatorics.hpp"
#include "ellhyp/errors.hpp"

namespace ellhyp {

namespace {

void check_config(const CauchyConfig& cfg) {
  if (cfg.z.size() != cfg.w.size()) {
    throw LengthMismatch("cauchy: |z| != |w|");
  }
  if (cfg.z.empty()) throw LengthMismatch("cauchy: M must be at least 1");
}

cplx sum_of(const std::vector<cplx>& v) {
  return std::accumulate(v.begin(), v.end(), cplx(0.0, 0.0));
}

// Entries [lambda+z_i+w_j+shift] / ([lambda][z_i+w_j+shift]).
std::vector<ScaledComplex> cauchy_matrix(const CauchyConfig& cfg, cplx shift) {
  const std::size_t M = cfg.z.size();
  const ScaledComplex lam = bracket_checked(cfg.kernel, cfg.lambda);
  std::vector<ScaledComplex> a(M * M);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const cplx zw = cfg.z[i] + cfg.w[j] + shift;
      a[i * M + j] = bracket(cfg.kernel, cfg.lambda + zw) /
                     (lam * bracket_checked(cfg.kernel, zw));
    }
  }
  return a;
}

}  // namespace

ScaledComplex lu_determinant(std::vector<ScaledComplex> a, std::size_t n) {
  ScaledComplex det = ScaledComplex::one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs_less(a[pivot * n + col], a[r * n + col])) pivot = r;
    }
    if (a[pivot * n + col].is_zero()) {
      throw SingularMatrix("lu_determinant: zero pivot in column " +
                           std::to_string(col + 1));
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a[pivot * n + k], a[col * n + k]);
      }
      det = -det;
    }
    const ScaledComplex p = a[col * n + col];
    det *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const ScaledComplex f = a[r * n + col] / p;
      if (f.is_zero()) continue;
      for (std::size_t k = col + 1; k < n; ++k) {
        a[r * n + k] -= f * a[col * n + k];
      }
    }
  }
  return det;
}

ScaledComplex cauchy_det_numeric(const CauchyConfig& cfg,
                                 double* cancellation) {
  check_config(cfg);
  const std::size_t n = cfg.z.size();
  std::vector<ScaledComplex> a = cauchy_matrix(cfg, 0.0);
  double rows_log2 = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[r * n + k].is_zero()) row = std::max(row, a[r * n + k].log2_abs());
    }
    rows_log2 += row;
  }
  const ScaledComplex det = lu_determinant(std::move(a), n);
  if (cancellation != nullptr) {
    *cancellation = det.is_zero()
                        ? std::numeric_limits<double>::infinity()
                        : std::max(1.0, std::exp2(rows_log2 - det.log2_abs()));
  }
  return det;
}

ScaledComplex cauchy_det_closed(const CauchyConfig& cfg) {
  check_config(cfg);
  const KernelSpec& K = cfg.kernel;
  ScaledComplex r = bracket(K, cfg.lambda + sum_of(cfg.z) + sum_of(cfg.w));
  r *= delta_product(K, cfg.z) * delta_product(K, cfg.w);
  r /= bracket_checked(K, cfg.lambda);
  for (cplx zi : cfg.z) {
    for (cplx wj : cfg.w) r /= bracket_checked(K, zi + wj);
  }
  return r;
}

ScaledComplex f_coefficient(const CauchyConfig& cfg, int d,
                            CoefficientSide side) {
  check_config(cfg);
  const int M = static_cast<int>(cfg.z.size());
  if (d < 0 || d > M) {
    throw LengthMismatch("f_coefficient: degree outside 0..M");
  }
  const auto& z = side == CoefficientSide::Z ? cfg.z : cfg.w;
  const auto& w = side == CoefficientSide::Z ? cfg.w : cfg.z;
  const KernelSpec& K = cfg.kernel;
  const cplx delta = K.delta();

  // Per-element factors, reused across subsets.
  std::vector<ScaledComplex> pair(static_cast<std::size_t>(M * M));
  std::vector<ScaledComplex> own(static_cast<std::size_t>(M),
                                 ScaledComplex::one());
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      const cplx diff = z[i] - z[j];
      pair[i * M + j] = bracket(K, diff + delta) / bracket_checked(K, diff);
    }
    for (int k = 0; k < M; ++k) {
      own[i] *= bracket(K, z[i] + w[k]) / bracket_checked(K, z[i] + w[k] + delta);
    }
  }

  ScaledComplex sum;
  std::vector<char> in_k(static_cast<std::size_t>(M));
  Subsets subsets(M, d);
  for (auto it = subsets.begin(); it != subsets.end(); ++it) {
    std::fill(in_k.begin(), in_k.end(), 0);
    for (int i : *it) in_k[i] = 1;
    ScaledComplex term = ScaledComplex::one();
    for (int i : *it) {
      term *= own[i];
      for (int j = 0; j < M; ++j) {
        if (!in_k[j]) term *= pair[i * M + j];
      }
    }
    sum += term;
  }
  return sum;
}

ScaledComplex f_direct(const CauchyConfig& cfg) {
  check_config(cfg);
  const int M = static_cast<int>(cfg.z.size());
  const KernelSpec& K = cfg.kernel;
  const cplx base = cfg.lambda + sum_of(cfg.z) + sum_of(cfg.w);
  const ScaledComplex base_br = bracket_checked(K, base);
  ScaledComplex sum;
  ScaledComplex upow = ScaledComplex::one();
  for (int d = 0; d <= M; ++d) {
    if (d > 0) {
      upow *= ScaledComplex(cfg.u);
      if (upow.is_zero()) break;
    }
    const ScaledComplex lam_ratio =
        bracket(K, base + static_cast<double>(d) * K.delta()) / base_br;
    sum += upow * lam_ratio * f_coefficient(cfg, d, CoefficientSide::Z);
  }
  return sum;
}

ScaledComplex f_operator(const CauchyConfig& cfg) {
  check_config(cfg);
  const std::size_t M = cfg.z.size();
  std::vector<ScaledComplex> a = cauchy_matrix(cfg, 0.0);
  const std::vector<ScaledComplex> ad = cauchy_matrix(cfg, cfg.kernel.delta());
  const ScaledComplex u(cfg.u);
  for (std::size_t k = 0; k < M * M; ++k) a[k] += u * ad[k];
  return lu_determinant(std::move(a), M) / cauchy_det_closed(cfg);
}

}  // namespace ellhyp
