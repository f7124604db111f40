#pragma once

#include "dysmooth/certificates.hpp"
#include "dysmooth/moduli.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dysmooth {

/// Psi_r(n) ~ M 2^{-n alpha}, fitted on levels with psi above the zero threshold.
struct DecayFit {
  double alpha = 0.0;
  double M = 0.0;         ///< max_n psi[n] 2^{n alpha} over the window
  double residual = 0.0;  ///< max |log2 psi - fit line|
  int window_lo = 0;
  int window_hi = 0;
  int levels_used = 0;
};

/// Least squares on (n, log2 psi[n]). Needs at least 4 usable levels
/// ("insufficient-data" validation error otherwise).
DecayFit fit_exponent(const ModulusProfile& profile);

enum class SaturationClass { polynomial, saturated, below_saturation, inconclusive };
const char* to_string(SaturationClass c);

struct SaturationVerdict {
  SaturationClass verdict = SaturationClass::inconclusive;
  std::vector<double> scaled;  ///< psi[n] 2^{nr}, one per profile level
  std::string evidence;
};

/// polynomial: every psi within the zero threshold. Otherwise, over the
/// last 4 levels of psi 2^{nr}: saturated when max/min <= 4, below
/// saturation when strictly increasing, inconclusive otherwise.
SaturationVerdict saturation_test(const ModulusProfile& profile, int r);

struct GeometricDecay {
  double lambda = 0.0;  ///< max psi[n+1] / psi[n]
  double mu = 0.0;      ///< max psi[n-1] / psi[n]
  bool equivalence = false;
};

/// equivalence iff lambda < 1 and mu < 2^r. Needs two levels and no zero
/// psi ("division" validation error; use saturation_test instead).
GeometricDecay geometric_decay_check(const ModulusProfile& profile, int r);

struct VerificationOptions {
  int n_lo = 3;
  int n_hi = 8;
  Weighting weighting = Weighting::theorem_statement;
  OmegaEstimateOptions omega;
  /// base_res for the per-axis directional estimates.
  int directional_res = 64;
  /// Profile levels computed beyond n_hi for the axis sums (clipped to the mesh cap).
  int profile_extra = 8;
};

struct VerificationRow {
  int n = 0;
  double t = 0.0;
  double psi = 0.0;
  double omega_hat = 0.0;
  std::vector<double> directional;  ///< per-axis estimates at u = t
  BoundReport bound;
  double axis_ratio = 0.0;          ///< max directional / axis_rhs
  double omega_ratio = 0.0;         ///< omega_hat / omega_rhs
  std::optional<double> omega1_ratio;
};

/// Psi identically zero while omega^2 stays near t^2 (f = x1 x2, r = 2).
struct BilinearWitness {
  double psi_max = 0.0;
  double min_omega_over_t2 = 0.0;
  bool holds = false;
};

struct VerificationReport {
  int r = 2;
  int d = 1;
  std::string function;
  VerificationOptions options;
  ModulusProfile profile;
  double sup_norm = 0.0;
  std::vector<VerificationRow> rows;
  double omega_ratio_slope = 0.0;  ///< least-squares log2 slope of omega_ratio vs n
  double axis_ratio_slope = 0.0;
  bool non_trending = false;       ///< |omega_ratio_slope| <= 0.1
  std::optional<DecayFit> fit;
  ConstantLedger ledger;           ///< empirical M1 / M2 / M filled in
  std::optional<BilinearWitness> witness;
};

inline constexpr double kTrendSlopeLimit = 0.1;

/// Least-squares slope of log2 y against n; zeros are skipped. Returns 0
/// with fewer than two usable points.
double log2_slope(const std::vector<int>& n, const std::vector<double>& y);

VerificationReport theorem_verification(const FunctionSource& source, int r, const VerificationOptions& options);

}  // namespace dysmooth
