// Acceptance run: one PASS/FAIL line per criterion, then a summary line.
// Exit status is 0 only when every criterion passes.

#include "dysmooth/analysis.hpp"
#include "dysmooth/cascade.hpp"
#include "dysmooth/catalog.hpp"
#include "dysmooth/certificates.hpp"
#include "dysmooth/cli.hpp"
#include "dysmooth/moduli.hpp"
#include "dysmooth/parallel.hpp"
#include "oracles.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

using namespace dysmooth;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_evaluated = 0;
int g_passed = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool pass = out.pass && in_time;
  ++g_evaluated;
  if (pass) ++g_passed;
  fmt::print("[{}] {:2d} {}: {} ({:.2f} s of {:.0f} s){}\n", pass ? "PASS" : "FAIL", id, name, out.detail, secs,
             budget_s, in_time ? "" : " over budget");
  std::fflush(stdout);
}

// 1
Outcome determinant_certificate() {
  int bad = 0;
  for (int r = 2; r <= 40; ++r)
    if (!verify_determinant_identity(r).pass) ++bad;
  return {bad == 0, fmt::format("|det| = 2^(r(r-1)/2) exactly for r = 2..40, {} mismatches", bad)};
}

// 2
Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int fields = 0, mismatches = 0;
  while (fields < 200) {
    const int d = 1 + static_cast<int>(rng() % 2);
    const int n = 1 + static_cast<int>(rng() % 4);
    const int r = 1 + static_cast<int>(rng() % 3);
    if ((1 << n) < r) continue;
    const DyadicGrid g(d, n);
    std::vector<double> v(g.size());
    for (auto& x : v) x = (rng() % 5 == 0) ? std::round(u(rng) * 3) : u(rng);  // some ties
    const auto fast = discrete_modulus(SampleField(g, v), r);
    const auto naive = oracle::naive_modulus(v, d, n, r);
    if (fast.value != naive.value || fast.argmax.value != naive.argmax_value) ++mismatches;
    ++fields;
  }
  return {mismatches == 0, fmt::format("{} seeded fields, {} mismatches in value or argmax value", fields, mismatches)};
}

// 3
Outcome annihilation_and_saturation() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  int failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + trial % 4;
    const int d = 1 + (trial / 4) % 3;
    std::vector<CatalogFunction::Monomial> terms;
    const int count = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < count; ++j) {
      CatalogFunction::Monomial m{coef(rng), std::vector<int>(static_cast<std::size_t>(d))};
      for (auto& e : m.exponents) e = static_cast<int>(rng() % static_cast<unsigned>(r));
      terms.push_back(m);
    }
    const FunctionSource f(CatalogFunction::poly(d, terms));
    const auto p = modulus_profile(f, r, min_level_for_order(r), 6);
    for (double psi : p.psi) {
      worst = std::max(worst, p.scale > 0 ? psi / p.scale : psi);
      if (psi > 1e-10 * p.scale) ++failures;
    }
    if (saturation_test(p, r).verdict != SaturationClass::polynomial) ++failures;
  }
  double worst_rel = 0.0;
  for (int r = 1; r <= 4; ++r) {
    const FunctionSource f(CatalogFunction::poly(1, {{1.0, {r}}}));
    const auto p = modulus_profile(f, r, std::max(1, min_level_for_order(r)), 6);
    const double fact = std::tgamma(r + 1.0);
    for (int n = p.n_min; n <= p.n_max(); ++n) {
      const double rel = std::abs(std::ldexp(p.at(n), n * r) - fact) / fact;
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-9) ++failures;
    }
    if (saturation_test(p, r).verdict != SaturationClass::saturated) ++failures;
  }
  return {failures == 0, fmt::format("50 polynomials: max psi/scale {:.2e}, all polynomial-class; x^r: max rel "
                                     "deviation of psi 2^(nr) from r! {:.2e}, all saturated; {} failures",
                                     worst, worst_rel, failures)};
}

// 4
Outcome exponent_recovery() {
  double worst = 0.0;
  std::string fits;
  for (int d = 1; d <= 2; ++d)
    for (double alpha : {0.5, 1.0, 1.5}) {
      const FunctionSource f(CatalogFunction::abs_power(d, 0, 0.5, alpha));
      const auto fit = fit_exponent(modulus_profile(f, 2, 4, d == 1 ? 12 : 8));
      worst = std::max(worst, std::abs(fit.alpha - alpha));
      fits += fmt::format(" d{}:{:.4f}", d, fit.alpha);
    }
  return {worst <= 0.05, fmt::format("fitted alpha{}; max error {:.2e}", fits, worst)};
}

// 5
Outcome cascade_bound() {
  struct Case {
    std::string label;
    std::function<CatalogFunction(int)> make;
    int min_d;
  };
  const std::vector<Case> cases{
      {"poly", [](int d) {
         return d == 1 ? CatalogFunction::poly(1, {{1.0, {3}}, {-0.5, {1}}})
                       : CatalogFunction::poly(2, {{1.0, {3, 0}}, {0.7, {1, 2}}, {-0.2, {0, 1}}});
       }, 1},
      {"abs-power", [](int d) { return CatalogFunction::abs_power(d, 0, 0.4375, 0.7); }, 1},
      {"radial-power", [](int d) { return CatalogFunction::radial_power(d, std::vector<double>(d, 0.3), 0.5); }, 1},
      {"diag-bilinear", [](int d) { return CatalogFunction::diag_bilinear(d); }, 2},
      {"weierstrass-truncated", [](int d) { return CatalogFunction::weierstrass(d, 0.5, 3.0, 12); }, 1},
  };
  const int n = 2, K = 8;
  int runs = 0, margin_fail = 0, final_fail = 0, mono_fail = 0, trend_fail = 0;
  double min_rel_margin = INFINITY, worst_rise = 1.0;
  std::string failed;
  for (const auto& c : cases)
    for (int d = c.min_d; d <= 2; ++d)
      for (int r = 1; r <= 3; ++r) {
        const FunctionSource f(c.make(d));
        std::vector<double> u(static_cast<std::size_t>(d), 0.29);
        const double t = std::ldexp(1.0, -n - 1) / 3;
        const auto rep = cascade_reconstruct(f, u, 0, t, r, n, K);
        ++runs;
        bool margins = rep.margins_nonnegative && rep.psi_final.has_value();
        bool mono = true;
        std::vector<int> ks;
        std::vector<double> errs;
        double prev = INFINITY;
        for (const auto& s : rep.stages) {
          if (s.k >= 1) {
            margins = margins && s.margin.has_value();
            if (s.margin && *s.bound > 0) min_rel_margin = std::min(min_rel_margin, *s.margin / *s.bound);
          }
          const double e = s.recon_error.value_or(INFINITY);
          if (e > prev * (1 + 1e-9) + 1e-12 * rep.scale) {
            mono = false;
            worst_rise = std::max(worst_rise, e / prev);
          }
          prev = e;
          ks.push_back(s.k);
          errs.push_back(std::max(e, 1e-300));
        }
        const double final_err = rep.stages.back().recon_error.value_or(INFINITY);
        const bool final_ok = final_err < 10 * rep.psi_final.value_or(0.0) + 1e-10 * rep.scale;
        // exact zero errors (polynomials reproduced) carry no trend
        const bool exact = final_err <= 1e-12 * rep.scale;
        const bool trend = exact || log2_slope(ks, errs) < 0.0;
        margin_fail += !margins;
        final_fail += !final_ok;
        mono_fail += !mono;
        trend_fail += !trend;
        if (!(margins && final_ok && mono)) failed += fmt::format(" {}(d={},r={})", c.label, d, r);
      }
  return {margin_fail + final_fail + mono_fail == 0,
          fmt::format("{} cascades (n={}, K={}); margin failures {} (min margin/bound {:.3g}); final >= 10 psi(n+K): {}; "
                      "||S - f|| not strictly non-increasing: {} (worst stage-to-stage rise x{:.3f}); "
                      "decreasing log2 trend missing: {}; failing:{}",
                      runs, n, K, margin_fail, min_rel_margin, final_fail, mono_fail, worst_rise, trend_fail,
                      failed.empty() ? " none" : failed)};
}

// 6
Outcome basic_cube_containment() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int bad = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    const int r = 1 + static_cast<int>(rng() % 6);
    const int lowest = r >= 2 ? min_level_for_order(2 * (r - 1)) : 1;
    const int n = lowest + static_cast<int>(rng() % 12);
    const int axis = static_cast<int>(rng() % static_cast<unsigned>(d));
    const double t = std::ldexp(1.0, -n - 1) * (rng() % 8 == 0 ? 1.0 : u01(rng) + 1e-9);
    std::vector<double> u(static_cast<std::size_t>(d));
    for (auto& x : u) x = rng() % 10 == 0 ? static_cast<double>(rng() % 2) : u01(rng);
    u[static_cast<std::size_t>(axis)] = std::min(u[static_cast<std::size_t>(axis)], 1.0 - r * t);
    try {
      const auto cube = select_basic_cube(u, axis, t, r, n);
      auto end = u;
      end[static_cast<std::size_t>(axis)] += r * t;
      if (!cube.contains(u) || !cube.contains(end) || !cube.inside_unit_cube()) ++bad;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  return {bad == 0, fmt::format("10000 seeded tuples (d <= 4, r <= 6), {} without containment", bad)};
}

// 7
Outcome lemma_empirics() {
  int kernel_bad = 0;
  for (int r = 2; r <= 4; ++r)
    for (int d = 1; d <= 2; ++d)
      if (!lemma_kernel_check(r, d).trivial) ++kernel_bad;
  std::mt19937_64 rng(7007);
  int over = 0;
  double worst = 0.0;
  std::vector<ConstantLedger> ledgers;
  for (int r = 2; r <= 4; ++r)
    for (int d = 1; d <= 2; ++d) ledgers.push_back(make_ledger(r, d));
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& ledger = ledgers[static_cast<std::size_t>(trial) % ledgers.size()];
    const auto inst = make_lemma_instance(ledger.r, ledger.d, std::ldexp(1.0, -3 - trial % 5),
                                          Point(static_cast<std::size_t>(ledger.d), 0.0), rng());
    const auto check = lemma_bound_check(inst, ledger);
    worst = std::max(worst, check.ratio / check.constant);
    if (!check.pass) ++over;
  }
  return {kernel_bad == 0 && over == 0,
          fmt::format("kernel trivial for all (r, d) by exact rank ({} failures); 1000 instances, max ratio/constant "
                      "{:.3f}, {} above the constant",
                      kernel_bad, worst, over)};
}

// 8
Outcome bilinear_witness() {
  const FunctionSource f(CatalogFunction::diag_bilinear(2));
  const auto p = modulus_profile(f, 2, 1, 8);
  const double psi_max = *std::max_element(p.psi.begin(), p.psi.end());
  OmegaEstimateOptions o;
  o.dir_count = 64;
  double worst = INFINITY;
  for (int n = 2; n <= 6; ++n) {
    const double t = std::ldexp(1.0, -n);
    worst = std::min(worst, omega_estimate(f, 2, t, o) / (t * t));
  }
  return {psi_max <= 1e-12 && worst >= 0.99,
          fmt::format("max psi_2 {:.1e}; min omega_hat(2^-n)/t^2 over n = 2..6: {:.5f}", psi_max, worst)};
}

// 9
Outcome bounded_ratio() {
  const double designed = std::log(1 / 0.5) / std::log(3.0);
  VerificationOptions o;
  o.n_lo = 3;
  o.n_hi = 8;
  o.weighting = Weighting::proof_final_line;
  o.omega.base_res = 4096;
  o.directional_res = 64;
  const auto kink = theorem_verification(FunctionSource(CatalogFunction::abs_power(1, 0, 0.5, 1.0)), 2, o);
  const auto weier = theorem_verification(FunctionSource(CatalogFunction::weierstrass(1, 0.5, 3.0, 12)), 2, o);
  const bool ok = designed < 2 && kink.non_trending && weier.non_trending;
  return {ok, fmt::format("proof weighting; log2 slope of omega_hat/rhs: abs-power {:+.4f}, weierstrass-truncated "
                          "{:+.4f} (designed alpha {:.4f} < r = 2); limit +-{}",
                          kink.omega_ratio_slope, weier.omega_ratio_slope, designed, kTrendSlopeLimit)};
}

// 10
Outcome determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"analyze", "--function", "abs-power", "--axis", "1", "--center", "0.5", "--alpha", "1", "--d", "1", "--r", "2",
       "--n", "2..10"},
      {"analyze", "--function", "weierstrass-truncated", "--a", "0.5", "--b", "3", "--m", "12", "--r", "2", "--n",
       "2..9", "--weighting", "proof"},
      {"certify", "--r", "2..12"},
      {"cascade", "--function", "radial-power", "--d", "2", "--center", "0.3,0.6", "--alpha", "0.5", "--r", "3", "--n",
       "3", "--u", "0.3,0.55", "--i", "2", "--t", "0.02", "--stages", "4"},
      {"verify", "--function", "diag-bilinear", "--d", "2", "--r", "2", "--n", "2..4", "--dirs", "32", "--base-res",
       "32", "--dir-res", "32", "--seed", "5"},
  };
  auto invoke = [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"dysmooth"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::make_pair(status, out.str());
  };
  const auto threads = thread_count();
  int differing = 0, failed = 0;
  for (const auto& cmd : commands) {
    set_thread_count(1);
    const auto a = invoke(cmd);
    const auto b = invoke(cmd);
    set_thread_count(4);
    const auto c = invoke(cmd);
    if (a.first != 0 || b.first != 0 || c.first != 0) ++failed;
    if (a.second != b.second || a.second != c.second) ++differing;
  }
  set_thread_count(threads);
  return {differing == 0 && failed == 0,
          fmt::format("{} commands run twice plus once with 4 workers: {} non-identical, {} failed", commands.size(),
                      differing, failed)};
}

}  // namespace

int main() {
  criterion(1, "determinant certificate", 5, determinant_certificate);
  criterion(2, "oracle equivalence", 10, oracle_equivalence);
  criterion(3, "annihilation / saturation", 30, annihilation_and_saturation);
  criterion(4, "exponent recovery", 60, exponent_recovery);
  criterion(5, "cascade bound", 120, cascade_bound);
  criterion(6, "basic-cube containment", 5, basic_cube_containment);
  criterion(7, "lemma empirics", 60, lemma_empirics);
  criterion(8, "non-redundancy witness", 20, bilinear_witness);
  criterion(9, "bounded-ratio verification", 120, bounded_ratio);
  criterion(10, "determinism", 30, determinism);
  fmt::print("criteria evaluated: {}/10, passed: {}/10\n", g_evaluated, g_passed);
  return g_passed == 10 ? 0 : 1;
}
