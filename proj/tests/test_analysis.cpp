#include "dysmooth/analysis.hpp"
#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dysmooth;

namespace {

ModulusProfile from_formula(int r, int lo, int hi, double (*psi)(int, int)) {
  std::vector<double> v;
  for (int n = lo; n <= hi; ++n) v.push_back(psi(n, r));
  return profile_from_values(r, 1, lo, v, 1.0);
}

}  // namespace

TEST(Fit, ExactLogLinear) {
  const auto p = from_formula(2, 2, 12, [](int n, int) { return std::ldexp(1.0, -n + 1); });
  const auto fit = fit_exponent(p);
  EXPECT_NEAR(fit.alpha, 1.0, 1e-9);
  EXPECT_NEAR(fit.M, 2.0, 1e-9);
  EXPECT_LT(fit.residual, 1e-9);
  EXPECT_EQ(fit.window_lo, 2);
  EXPECT_EQ(fit.window_hi, 12);
}

TEST(Fit, SquareRootFirstOrder) {
  const FunctionSource f(CatalogFunction::abs_power(1, 0, 0.0, 0.5));
  const auto fit = fit_exponent(modulus_profile(f, 1, 2, 14));
  EXPECT_NEAR(fit.alpha, 0.5, 1e-6);
  EXPECT_NEAR(fit.M, 1.0, 1e-6);
}

TEST(Fit, MonomialRecoversOrder) {
  for (int r = 1; r <= 4; ++r) {
    const auto p = from_formula(r, 2, 9, [](int n, int rr) { return std::tgamma(rr + 1.0) * std::ldexp(1.0, -n * rr); });
    EXPECT_NEAR(fit_exponent(p).alpha, r, 1e-12);
  }
}

TEST(Fit, InsufficientData) {
  const auto p = profile_from_values(2, 1, 2, {0.5, 0.25, 0.0, 0.0, 0.0});
  try {
    fit_exponent(p);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "insufficient-data");
  }
}

TEST(Saturation, Classes) {
  const auto zero = profile_from_values(2, 1, 1, std::vector<double>(6, 0.0));
  EXPECT_EQ(saturation_test(zero, 2).verdict, SaturationClass::polynomial);

  const auto sat = from_formula(3, 2, 8, [](int n, int r) { return 6.0 * std::ldexp(1.0, -n * r); });
  const auto v = saturation_test(sat, 3);
  EXPECT_EQ(v.verdict, SaturationClass::saturated);
  for (double s : v.scaled) EXPECT_NEAR(s, 6.0, 1e-12);

  const auto kink = from_formula(2, 2, 10, [](int n, int) { return std::ldexp(1.0, -n + 1); });
  EXPECT_EQ(saturation_test(kink, 2).verdict, SaturationClass::below_saturation);

  const auto wobble = profile_from_values(1, 1, 1, {1.0, 0.01, 1.0, 0.01, 1.0});
  EXPECT_EQ(saturation_test(wobble, 1).verdict, SaturationClass::inconclusive);

  // one level above the threshold rules out the polynomial class
  const auto almost = profile_from_values(2, 1, 1, {0.0, 0.0, 1e-9, 0.0}, 1.0);
  EXPECT_NE(saturation_test(almost, 2).verdict, SaturationClass::polynomial);
}

TEST(GeometricDecayTest, Examples) {
  const auto kink = from_formula(2, 2, 10, [](int n, int) { return std::ldexp(1.0, -n + 1); });
  const auto g = geometric_decay_check(kink, 2);
  EXPECT_DOUBLE_EQ(g.lambda, 0.5);
  EXPECT_DOUBLE_EQ(g.mu, 2.0);
  EXPECT_TRUE(g.equivalence);

  const auto mono = from_formula(2, 2, 10, [](int n, int r) { return 2.0 * std::ldexp(1.0, -n * r); });
  const auto m = geometric_decay_check(mono, 2);
  EXPECT_DOUBLE_EQ(m.lambda, 0.25);
  EXPECT_DOUBLE_EQ(m.mu, 4.0);
  EXPECT_FALSE(m.equivalence);

  const auto flat = profile_from_values(2, 1, 1, std::vector<double>(5, 0.3));
  EXPECT_FALSE(geometric_decay_check(flat, 2).equivalence);

  const auto holes = profile_from_values(2, 1, 1, {0.3, 0.0, 0.1});
  try {
    geometric_decay_check(holes, 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "division");
  }
}

TEST(Slope, Log2) {
  EXPECT_NEAR(log2_slope({1, 2, 3, 4}, {2, 4, 8, 16}), 1.0, 1e-12);
  EXPECT_EQ(log2_slope({1}, {3.0}), 0.0);
}

TEST(Verification, BilinearWitness) {
  const FunctionSource f(CatalogFunction::diag_bilinear(2));
  VerificationOptions o;
  o.n_lo = 2;
  o.n_hi = 4;
  o.profile_extra = 2;
  o.omega.dir_count = 64;
  o.omega.base_res = 32;
  o.directional_res = 16;
  const auto report = theorem_verification(f, 2, o);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_TRUE(report.witness->holds);
  EXPECT_LE(report.witness->psi_max, 1e-12);
  ASSERT_TRUE(report.ledger.empirical_M2.has_value());
  for (const auto& row : report.rows) {
    // only the t^r ||f|| term keeps the bound positive
    EXPECT_NEAR(row.bound.omega_rhs, row.t * row.t * report.sup_norm, 1e-15);
    EXPECT_GT(row.omega_ratio, 0.0);
  }
}

TEST(Verification, KinkRatioDoesNotTrend) {
  const FunctionSource f(CatalogFunction::abs_power(1, 0, 0.5, 1.0));
  VerificationOptions o;
  o.n_lo = 3;
  o.n_hi = 8;
  o.weighting = Weighting::proof_final_line;
  o.omega.base_res = 1024;
  o.directional_res = 256;
  const auto report = theorem_verification(f, 2, o);
  EXPECT_TRUE(report.non_trending) << report.omega_ratio_slope;
  ASSERT_TRUE(report.fit.has_value());
  EXPECT_NEAR(report.fit->alpha, 1.0, 1e-9);
  for (const auto& row : report.rows) EXPECT_GE(row.omega_hat, row.psi);
}

TEST(Verification, NeedsAnalyticSource) {
  const FunctionSource f(sample(FunctionSource(CatalogFunction::abs_power(1, 0, 0.5, 1.0)), DyadicGrid(1, 6)));
  EXPECT_THROW(theorem_verification(f, 2, VerificationOptions{}), Error);
}
