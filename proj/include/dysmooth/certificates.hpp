#pragma once

#include "dysmooth/cascade.hpp"
#include "dysmooth/exact.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dysmooth {

inline constexpr int kMaxLemmaOrder = 40;

/// The (r-1) x (r-1) matrix a_{i,j} = (-1)^{r+i} C(r, 2j-i) (1-based i, j;
/// C(r, m) = 0 for m outside [0, r]). It maps the odd-node values
/// (v_1..v_{r-1}) of a function that vanishes at the even nodes
/// 0, 2, ..., 2(r-1) to its r-th differences at offsets 0..r-2.
ExactMatrix lemma_matrix(int r);

struct DeterminantCheck {
  int r = 2;
  BigInt det;        ///< signed determinant
  BigInt expected;   ///< 2^{r(r-1)/2}
  bool pass = false; ///< |det| == expected
};

/// |det(lemma_matrix(r))| == 2^{r(r-1)/2}, exactly.
DeterminantCheck verify_determinant_identity(int r);

/// ||m^{-1}||_inf = max row sum of |adj(m)| / |det m|, exact. Throws a
/// "singular" validation error when det m = 0.
Rational inverse_infinity_norm(const ExactMatrix& m);

struct LebesgueConstant {
  double value = 1.0;
  int resolution = 0;  ///< grid intervals at which the value stabilised to 1e-6
};

/// max over [0, r-1] of sum_i |l_i(x)| for nodes 0..r-1, by dense search
/// starting at `resolution` intervals and doubling until two consecutive
/// refinements agree to 1e-6. Requires resolution >= 1024.
LebesgueConstant lebesgue_constant_uniform(int r, int resolution = 1024);

/// Constructive constant of the one-dimensional lemma with its factors:
/// c(r) = lebesgue(r) * c3(r), c3(r) = ||lemma_matrix(r)^{-1}||_inf.
/// For r = 1 the trivial lemma gives c(1) = 1.
struct LemmaConstant1d {
  int r = 2;
  double lebesgue = 1.0;
  Rational c3 = 1;
  double value = 0.0;
};
LemmaConstant1d lemma_constant_1d(int r);

/// Constructive constant of the d-dimensional lemma, assembled along the
/// dimension induction:
///   c(r, 1) = lebesgue * c3
///   c(r, m) = lebesgue^{m-1} * (c(r, 1) + lebesgue * c(r, m-1))
/// The first term bounds g - P on each x_m fibre, the second bounds the
/// fibre interpolant P through the even slices, and lebesgue^{m-1}
/// carries the fibre bound across the remaining coordinates.
/// For r = 1 the constant is d.
struct LemmaConstantDd {
  int r = 2;
  int d = 1;
  LemmaConstant1d one_dim;
  std::vector<double> by_dimension;  ///< c(r, 1), ..., c(r, d)
  double value = 0.0;
  std::string assembly;              ///< human-readable factor tree
};
LemmaConstantDd lemma_constant_dd(int r, int d);

/// Constructive constants plus empirical counterparts of the theorem's
/// constants. Empirical fields are measurements, never proof constants.
struct ConstantLedger {
  int r = 2;
  int d = 1;
  BigInt det_abs;
  Rational inv_inf_norm;
  double lebesgue_1d = 1.0;
  double lemma_c_1d = 0.0;
  double lemma_c_dd = 0.0;
  LemmaConstantDd breakdown;
  std::optional<double> empirical_M1;
  std::optional<double> empirical_M2;
  std::optional<double> empirical_M;
};
ConstantLedger make_ledger(int r, int d);

struct LemmaCheck {
  double g_norm = 0.0;        ///< dense-sampled sup of |g|
  double max_difference = 0.0;
  double ratio = 0.0;         ///< g_norm / max_difference (0/0 := 0)
  double constant = 0.0;
  int samples_per_axis_per_cell = 0;
  bool pass = false;
};

/// Compares ||g|| against the lemma's difference maximum and constant.
LemmaCheck lemma_bound_check(const LemmaInstance& instance, const ConstantLedger& ledger);

/// Linear map from the free (non-all-even) grid values to the lemma's
/// difference vector, as an exact integer matrix.
ExactMatrix lemma_difference_map(int r, int d);

struct KernelCheck {
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
  bool trivial = false;  ///< rank == unknowns: vanishing differences force g = 0
};
KernelCheck lemma_kernel_check(int r, int d);

}  // namespace dysmooth
