#pragma once

#include "dysmooth/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dysmooth {

/// Location of the largest |r-th difference| on a mesh.
struct ModulusArgmax {
  int axis = 0;        ///< 0-based
  MultiIndex index;    ///< base multi-index k
  double value = 0.0;  ///< signed difference at (axis, k)
};

/// Psi_r(f, n) with its per-axis maxima.
struct DiscreteModulus {
  double value = 0.0;
  std::vector<double> per_axis;
  ModulusArgmax argmax;
};

/// Largest |Delta^r_{s 2^{-n} e_i} f(2^{-n} k)| over every axis i and every
/// admissible k (k_i + r s <= 2^n). Exact max; ties go to the smallest
/// (axis, flat index), so the result does not depend on the thread count.
/// Throws "level" validation error when 2^n < r s.
DiscreteModulus discrete_modulus(const SampleField& field, int r, int stride = 1);

/// Psi_r(f, n) for n in [n_min, n_max].
struct ModulusProfile {
  int r = 1;
  int d = 1;
  int n_min = 0;
  std::vector<double> psi;
  std::vector<std::vector<double>> per_axis;
  std::vector<ModulusArgmax> argmax;
  /// max |f| over the finest mesh scanned; scale for zero tolerances.
  double scale = 0.0;

  int n_max() const noexcept { return n_min + static_cast<int>(psi.size()) - 1; }
  bool covers(int n) const noexcept { return n >= n_min && n <= n_max(); }
  double at(int n) const { return psi.at(static_cast<std::size_t>(n - n_min)); }
  /// Values below the threshold count as zero.
  double zero_threshold() const noexcept;
};

/// Smallest level at which order-r differences fit: ceil(log2 r).
int min_level_for_order(int r);

ModulusProfile modulus_profile(const FunctionSource& source, int r, int n_min, int n_max);

/// Profile from explicit values (tests, re-loaded reports). Argmax left empty.
ModulusProfile profile_from_values(int r, int d, int n_min, std::vector<double> psi, double scale = 1.0);

/// Largest m >= 0 with r 2^{m-n-1} <= 1. When no m qualifies (r > 2^{n+1})
/// the value is 0 and `clamped` is set; the middle sum is then empty.
struct NZero {
  int value = 0;
  bool clamped = false;
};
NZero n_zero(int r, int n);

struct AxisBound {
  double value = 0.0;
  bool tail_truncated = true;
  double tail = 0.0;  ///< geometric tail added (0 when truncated)
  double ratio = 0.0; ///< rho used for the tail
};

/// Sum_{k>=0} Psi_r(n+k) over the profile, plus a geometric tail
/// psi[n_max] rho/(1-rho) when the last three ratios are all <= rho < 0.95.
AxisBound axis_bound_rhs(const ModulusProfile& profile, int n);

inline constexpr double kTailRatioLimit = 0.95;

enum class Weighting {
  theorem_statement,  ///< 2^{kr} Psi_r(n-k)
  proof_final_line,   ///< 2^{-kr} Psi_r(n-k)
};

const char* to_string(Weighting w);
Weighting parse_weighting(const std::string& text);

/// Right-hand sides of the axis bound, the omega bound and (r = 1) the
/// first-modulus bound, all without their unknown constants.
struct BoundReport {
  int n = 0;
  double t = 0.0;
  NZero n0;
  double axis_rhs = 0.0;
  double middle_sum = 0.0;
  double omega_rhs = 0.0;
  std::optional<double> omega1_rhs;
  double sup_norm = 0.0;
  bool tail_truncated = true;
  bool coverage_warning = false;  ///< some Psi_r(n-k) fell below the profile
  Weighting weighting = Weighting::theorem_statement;
};

/// Requires 2^{-n-1} < t <= 2^{-n}.
BoundReport omega_bound_rhs(const ModulusProfile& profile, int n, double t, double sup_norm,
                            Weighting weighting = Weighting::theorem_statement);

/// Lower estimate of omega^r_{e_i}(f, u): max |Delta^r_{h e_i} f(x)| over
/// x on the lattice {j / base_res}^d and h in {u j / base_res : j = 1..base_res},
/// admissible segments only. Multiplying base_res by an integer refines both
/// sets, so the estimate never decreases under such refinement.
double directional_modulus_estimate(const FunctionSource& source, int r, int axis, double u, int base_res);

struct OmegaEstimateOptions {
  int dir_count = 64;
  int base_res = 64;
  std::uint64_t seed = 1;
  int steps_per_octave = 8;
  /// Smallest step magnitude considered (absolute), 2^{-min_step_exponent}.
  int min_step_exponent = 16;
};

/// Step magnitudes used by omega_estimate for a given t: the global grid
/// {2^{-q}(1 + j/S)} intersected with [2^{-min_step_exponent}, t]. The grid
/// does not depend on t, so the estimate is non-decreasing in t.
std::vector<double> omega_step_grid(double t, const OmegaEstimateOptions& options);

/// Unit directions: the d axes followed by dir_count - d quasi-random
/// directions in a half space, deterministic in (d, dir_count, seed).
std::vector<std::vector<double>> omega_directions(int d, int dir_count, std::uint64_t seed);

/// Lower estimate of omega^r(f, t) by sampling directions, step magnitudes
/// and lattice base points {j / base_res}^d.
double omega_estimate(const FunctionSource& source, int r, double t, const OmegaEstimateOptions& options);

/// Sup-norm estimate: max |f| over the level-`level` mesh and the base lattice.
double sup_norm_estimate(const FunctionSource& source, int level, int base_res);

}  // namespace dysmooth
