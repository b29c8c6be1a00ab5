#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ellhyp/combinatorics.hpp"
#include "ellhyp/kernel.hpp"
#include "ellhyp/scaled_complex.hpp"

namespace ellhyp {

enum class IdentityId {
  CauchyDet,
  FSymmetry,
  FCoefficientD,
  PpdSpecialized,
  DualityPhi,
  DualityPhiTfpp,
  DualityPhiBe,
  DualityPhiBasic,
  PhiToE,
  EToPhi,
  Phi2nReduction,
  EDuality,
  JacksonSumEm2,
  FrenkelTuraev8e7,
  EM3To2m8,
  Bailey10e9,
  BaileyIA,
  BaileyIIA,
  BaileyIB,
  BaileyIIB,
  BaileyIW,
  BaileyIIW,
  EPeriodicity,
  EulerTransformation,
};

/// Which size parameters an identity reads.
struct SizeUse {
  bool m = false;
  bool n = false;
  bool N = false;
  bool M = false;
  bool alpha = false;
};

struct IdentityInfo {
  IdentityId id;
  std::string_view name;
  std::string_view anchor;
  std::string_view description;
  std::string_view constraints;
  SizeUse uses;
  int min_m = 1;
  int min_n = 0;
  /// Empty means every kernel variant applies.
  std::optional<KernelVariant> only_kernel;
  bool has_balance = false;
};

/// Registry in fixed order (24 entries).
std::span<const IdentityInfo> list_identities();
const IdentityInfo& identity_info(IdentityId id);
std::optional<IdentityId> parse_identity(std::string_view name);
std::string_view to_string(IdentityId id);

bool identity_applies(IdentityId id, KernelVariant variant);

struct Sizes {
  int m = 1;
  int n = 1;
  int N = 1;
  int M = 2;
  /// Termination data for mode (B); drawn at random when absent.
  std::optional<MultiIndex> alpha;
};

struct NamedValues {
  std::string name;
  std::vector<cplx> values;
};

struct NamedIndices {
  std::string name;
  std::vector<int> values;
};

struct DependentValue {
  std::string label;  // e.g. "b[2]" (1-based) or "c"
  cplx value;
  bool balance = false;  // solved from a balancing (not termination) condition
};

struct ParameterDraw {
  IdentityId id = IdentityId::CauchyDet;
  KernelSpec kernel;
  Sizes sizes;
  /// Every parameter, free and solved, keyed by name in sampling order.
  std::vector<NamedValues> params;
  std::vector<NamedIndices> indices;
  std::vector<DependentValue> dependent;
  double balance_residual = 0.0;
  std::uint64_t seed = 0;
  int resamples = 0;
  /// Resamples caused by cancellation beyond kMaxCancellation (subset of
  /// resamples).
  int ill_conditioned = 0;
  bool balance_broken = false;

  const std::vector<cplx>& values(std::string_view name) const;
  cplx scalar(std::string_view name) const;
  const std::vector<int>& index(std::string_view name) const;
  bool has_index(std::string_view name) const;
};

enum class Outcome { Pass, Fail, Inconclusive, Error };
std::string_view to_string(Outcome o);

struct VerificationReport {
  IdentityId id = IdentityId::CauchyDet;
  ParameterDraw draw;
  ScaledComplex lhs;
  ScaledComplex rhs;
  double rel_err = 0.0;
  double tolerance = 0.0;
  Outcome outcome = Outcome::Inconclusive;
  std::string note;
  /// Worst max|term|/|sum| over the series evaluated for this report.
  double cancellation = 1.0;
  double wall_time = 0.0;  // seconds

  bool pass() const { return outcome == Outcome::Pass; }
};

/// Draws whose series lose more than this factor to cancellation cannot be
/// compared at the default tolerances in double precision; the sampler
/// redraws them like a pole hit.
inline constexpr double kMaxCancellation = 1e4;

/// Default tolerance for an identity on a kernel variant.
double default_tolerance(IdentityId id, KernelVariant variant);

/// Splitmix64 finalizer, used to derive independent per-case seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t component);

/// Draws free parameters, solves the dependent ones, and resamples (at most
/// 100 times) until every pole probe of both sides passes and the
/// cancellation stays below kMaxCancellation.
/// Throws SamplingExhausted, ConstraintViolated (sizes or kernel unsuitable).
ParameterDraw sample_parameters(IdentityId id, const Sizes& sizes,
                                const KernelSpec& kernel, std::uint64_t seed,
                                bool break_balance = false);

/// Evaluates both sides for the draw.
VerificationReport verify_identity(IdentityId id, const ParameterDraw& draw,
                                   double tol);

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct SuiteConfig {
  std::vector<IdentityId> ids;
  std::vector<KernelVariant> kernels;
  IntRange m{1, 2};
  IntRange n{1, 2};
  IntRange N{0, 3};
  IntRange M{1, 4};
  std::optional<MultiIndex> alpha;
  int trials = 3;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  bool random_gauge = true;
  bool break_balance = false;
  int jobs = 1;
  /// Periods used for the elliptic kernel.
  cplx omega1{1.0, 0.0};
  cplx omega2{0.0, 1.1};
};

/// Cartesian sweep over ids x kernels x sizes x trials. Deterministic given
/// the seed, independent of jobs; per-case errors are recorded, never thrown.
std::vector<VerificationReport> run_suite(const SuiteConfig& config);

/// Kernel of the given variant with the suite's periods and a gauge that is
/// random (|a|,|b| <= 0.5, 0.5 <= |c| <= 2) or trivial.
KernelSpec suite_kernel(const SuiteConfig& config, KernelVariant variant,
                        std::uint64_t seed);

}  // namespace ellhyp
