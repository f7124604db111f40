#include "dysmooth/analysis.hpp"

#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace dysmooth {

const char* to_string(SaturationClass c) {
  switch (c) {
    case SaturationClass::polynomial: return "polynomial-class";
    case SaturationClass::saturated: return "saturated";
    case SaturationClass::below_saturation: return "below-saturation";
    case SaturationClass::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

}  // namespace

double log2_slope(const std::vector<int>& n, const std::vector<double>& y) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size() && i < y.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    xs.push_back(n[i]);
    ys.push_back(std::log2(y[i]));
  }
  if (xs.size() < 2) return 0.0;
  return least_squares(xs, ys).slope;
}

DecayFit fit_exponent(const ModulusProfile& profile) {
  const double zero = profile.zero_threshold();
  std::vector<double> xs, ys;
  for (int n = profile.n_min; n <= profile.n_max(); ++n) {
    const double v = profile.at(n);
    if (v > zero) {
      xs.push_back(n);
      ys.push_back(std::log2(v));
    }
  }
  if (xs.size() < 4)
    throw validation_error("insufficient-data",
                           fmt::format("decay fit needs 4 levels with nonzero psi, found {}; see the saturation test",
                                       xs.size()));
  const auto line = least_squares(xs, ys);
  DecayFit fit;
  fit.alpha = -line.slope;
  fit.window_lo = static_cast<int>(xs.front());
  fit.window_hi = static_cast<int>(xs.back());
  fit.levels_used = static_cast<int>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.M = std::max(fit.M, std::exp2(ys[i] + xs[i] * fit.alpha));
    fit.residual = std::max(fit.residual, std::abs(ys[i] - (line.intercept + line.slope * xs[i])));
  }
  if (!std::isfinite(fit.alpha)) throw invariant_error("fitted exponent is not finite");
  return fit;
}

SaturationVerdict saturation_test(const ModulusProfile& profile, int r) {
  SaturationVerdict out;
  const double zero = profile.zero_threshold();
  bool all_zero = true;
  for (int n = profile.n_min; n <= profile.n_max(); ++n) {
    const double v = profile.at(n);
    out.scaled.push_back(std::ldexp(v, n * r));
    if (v > zero) all_zero = false;
  }
  if (out.scaled.empty()) {
    out.evidence = "empty profile";
    return out;
  }
  if (all_zero) {
    out.verdict = SaturationClass::polynomial;
    out.evidence = fmt::format("all psi <= {:.3g} (1e-12 * scale)", zero);
    return out;
  }
  const std::size_t count = std::min<std::size_t>(4, out.scaled.size());
  const auto first = out.scaled.end() - static_cast<std::ptrdiff_t>(count);
  const auto [lo, hi] = std::minmax_element(first, out.scaled.end());
  const bool increasing = std::adjacent_find(first, out.scaled.end(), std::greater_equal<>()) == out.scaled.end();
  const double spread = *lo > 0.0 ? *hi / *lo : INFINITY;
  if (count >= 2 && *lo > 0.0 && spread <= 4.0) {
    out.verdict = SaturationClass::saturated;
    out.evidence = fmt::format("psi 2^(nr) over the last {} levels within [{:.6g}, {:.6g}], max/min {:.4g} <= 4", count,
                               *lo, *hi, spread);
  } else if (count >= 2 && increasing) {
    out.verdict = SaturationClass::below_saturation;
    out.evidence = fmt::format("psi 2^(nr) strictly increasing over the last {} levels ({:.6g} -> {:.6g})", count,
                               *first, out.scaled.back());
  } else {
    out.evidence = fmt::format("psi 2^(nr) over the last {} levels: max/min {:.4g}, no monotone growth", count, spread);
  }
  return out;
}

GeometricDecay geometric_decay_check(const ModulusProfile& profile, int r) {
  if (profile.psi.size() < 2) throw validation_error("insufficient-data", "geometric decay check needs two levels");
  const double zero = profile.zero_threshold();
  for (int n = profile.n_min; n <= profile.n_max(); ++n)
    if (!(profile.at(n) > zero))
      throw validation_error("division",
                             fmt::format("psi at level {} is zero; use the saturation test for such profiles", n));
  GeometricDecay g;
  for (std::size_t i = 0; i + 1 < profile.psi.size(); ++i) {
    g.lambda = std::max(g.lambda, profile.psi[i + 1] / profile.psi[i]);
    g.mu = std::max(g.mu, profile.psi[i] / profile.psi[i + 1]);
  }
  g.equivalence = g.lambda < 1.0 && g.mu < std::ldexp(1.0, r);
  return g;
}

VerificationReport theorem_verification(const FunctionSource& source, int r, const VerificationOptions& options) {
  if (!source.is_analytic())
    throw validation_error("source", "verification needs an analytic source (off-mesh evaluation)");
  const int d = source.dimension();
  const int floor_level = min_level_for_order(r);
  if (options.n_lo < floor_level || options.n_hi < options.n_lo)
    throw validation_error("level", fmt::format("level range {}..{} invalid for r = {} (lowest {})", options.n_lo,
                                                options.n_hi, r, floor_level));
  const int cap = DyadicGrid::kLevelBudget / d;
  if (options.n_hi > cap) throw capacity_error(fmt::format("level {} above the mesh cap {} for d = {}", options.n_hi, cap, d));

  VerificationReport report;
  report.r = r;
  report.d = d;
  report.function = source.function().name();
  report.options = options;
  report.profile = modulus_profile(source, r, floor_level, std::min(cap, options.n_hi + std::max(0, options.profile_extra)));
  report.sup_norm = sup_norm_estimate(source, report.profile.n_max(), options.omega.base_res);
  report.ledger = make_ledger(r, d);
  try {
    report.fit = fit_exponent(report.profile);
  } catch (const Error&) {
    report.fit.reset();
  }

  std::vector<int> levels;
  std::vector<double> omega_ratios, axis_ratios;
  for (int n = options.n_lo; n <= options.n_hi; ++n) {
    VerificationRow row;
    row.n = n;
    row.t = std::ldexp(1.0, -n);
    row.psi = report.profile.at(n);
    row.omega_hat = omega_estimate(source, r, row.t, options.omega);
    for (int axis = 0; axis < d; ++axis)
      row.directional.push_back(directional_modulus_estimate(source, r, axis, row.t, options.directional_res));
    row.bound = omega_bound_rhs(report.profile, n, row.t, report.sup_norm, options.weighting);
    const double dir_max = *std::max_element(row.directional.begin(), row.directional.end());
    row.axis_ratio = row.bound.axis_rhs > 0.0 ? dir_max / row.bound.axis_rhs : 0.0;
    row.omega_ratio = row.bound.omega_rhs > 0.0 ? row.omega_hat / row.bound.omega_rhs : 0.0;
    if (row.bound.omega1_rhs)
      row.omega1_ratio = *row.bound.omega1_rhs > 0.0 ? row.omega_hat / *row.bound.omega1_rhs : 0.0;
    levels.push_back(n);
    omega_ratios.push_back(row.omega_ratio);
    axis_ratios.push_back(row.axis_ratio);
    report.rows.push_back(std::move(row));
  }
  report.omega_ratio_slope = log2_slope(levels, omega_ratios);
  report.axis_ratio_slope = log2_slope(levels, axis_ratios);
  report.non_trending = std::abs(report.omega_ratio_slope) <= kTrendSlopeLimit;

  double m1 = 0.0, m2 = 0.0;
  std::optional<double> m;
  for (const auto& row : report.rows) {
    m1 = std::max(m1, row.axis_ratio);
    m2 = std::max(m2, row.omega_ratio);
    if (row.omega1_ratio) m = std::max(m.value_or(0.0), *row.omega1_ratio);
  }
  report.ledger.empirical_M1 = m1;
  report.ledger.empirical_M2 = m2;
  report.ledger.empirical_M = m;

  if (r == 2 && std::holds_alternative<CatalogFunction::DiagBilinear>(source.function().params())) {
    BilinearWitness w;
    w.psi_max = *std::max_element(report.profile.psi.begin(), report.profile.psi.end());
    w.min_omega_over_t2 = INFINITY;
    for (const auto& row : report.rows) w.min_omega_over_t2 = std::min(w.min_omega_over_t2, row.omega_hat / (row.t * row.t));
    w.holds = w.psi_max <= 1e-12 && w.min_omega_over_t2 >= 0.99;
    report.witness = w;
  }
  return report;
}

}  // namespace dysmooth
