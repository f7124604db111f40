#include "dysmooth/catalog.hpp"

#include "dysmooth/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace dysmooth {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > 4) throw capacity_error(fmt::format("dimension {} outside 1..4", d));
}

double ipow(double x, int e) {
  double result = 1.0;
  for (int i = 0; i < e; ++i) result *= x;
  return result;
}

}  // namespace

CatalogFunction CatalogFunction::poly(int d, std::vector<Monomial> terms) {
  check_dimension(d);
  for (auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) > d)
      throw validation_error("function", fmt::format("monomial has {} exponents for dimension {}", t.exponents.size(), d));
    t.exponents.resize(static_cast<std::size_t>(d), 0);
    for (int e : t.exponents)
      if (e < 0 || e > 64) throw validation_error("function", fmt::format("exponent {} outside 0..64", e));
    if (!std::isfinite(t.coefficient)) throw validation_error("function", "non-finite polynomial coefficient");
  }
  return CatalogFunction(d, Poly{std::move(terms)});
}

CatalogFunction CatalogFunction::abs_power(int d, int axis, double center, double alpha) {
  check_dimension(d);
  if (axis < 0 || axis >= d)
    throw validation_error("function", fmt::format("axis {} outside 1..{}", axis + 1, d));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw validation_error("function", "abs-power needs alpha > 0");
  if (!std::isfinite(center)) throw validation_error("function", "abs-power center must be finite");
  return CatalogFunction(d, AbsPower{axis, center, alpha});
}

CatalogFunction CatalogFunction::radial_power(int d, std::vector<double> center, double alpha) {
  check_dimension(d);
  if (center.size() == 1 && d > 1) center.assign(static_cast<std::size_t>(d), center.front());
  if (static_cast<int>(center.size()) != d)
    throw validation_error("function", fmt::format("radial-power center has {} coordinates, expected {}", center.size(), d));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw validation_error("function", "radial-power needs alpha > 0");
  return CatalogFunction(d, RadialPower{std::move(center), alpha});
}

CatalogFunction CatalogFunction::diag_bilinear(int d) {
  check_dimension(d);
  if (d < 2) throw validation_error("function", "diag-bilinear needs dimension >= 2");
  return CatalogFunction(d, DiagBilinear{});
}

CatalogFunction CatalogFunction::weierstrass(int d, double a, double b, int terms) {
  check_dimension(d);
  if (!(a > 0.0 && a < 1.0)) throw validation_error("function", "weierstrass-truncated needs 0 < a < 1");
  if (!(b > 0.0) || !(a * b >= 1.0)) throw validation_error("function", "weierstrass-truncated needs b > 0 and a*b >= 1");
  if (terms < 0 || terms > 30) throw validation_error("function", fmt::format("weierstrass-truncated terms {} outside 0..30", terms));
  CatalogFunction f(d, Weierstrass{a, b, terms});
  double amp = 1.0;
  double freq = std::numbers::pi;
  for (int m = 0; m <= terms; ++m) {
    f.amplitudes_.push_back(amp);
    f.frequencies_.push_back(freq);
    amp *= a;
    freq *= b;
  }
  return f;
}

std::string CatalogFunction::name() const {
  struct Visitor {
    std::string operator()(const Poly&) const { return "poly"; }
    std::string operator()(const AbsPower&) const { return "abs-power"; }
    std::string operator()(const RadialPower&) const { return "radial-power"; }
    std::string operator()(const DiagBilinear&) const { return "diag-bilinear"; }
    std::string operator()(const Weierstrass&) const { return "weierstrass-truncated"; }
  };
  return std::visit(Visitor{}, params_);
}

double CatalogFunction::operator()(std::span<const double> x) const {
  if (const auto* p = std::get_if<Poly>(&params_)) {
    double sum = 0.0;
    for (const auto& t : p->terms) {
      double term = t.coefficient;
      for (std::size_t j = 0; j < t.exponents.size(); ++j) term *= ipow(x[j], t.exponents[j]);
      sum += term;
    }
    return sum;
  }
  if (const auto* p = std::get_if<AbsPower>(&params_)) {
    const double dist = std::abs(x[static_cast<std::size_t>(p->axis)] - p->center);
    return p->alpha == 1.0 ? dist : std::pow(dist, p->alpha);
  }
  if (const auto* p = std::get_if<RadialPower>(&params_)) {
    double sq = 0.0;
    for (std::size_t j = 0; j < p->center.size(); ++j) {
      const double diff = x[j] - p->center[j];
      sq += diff * diff;
    }
    return std::pow(sq, 0.5 * p->alpha);
  }
  if (std::holds_alternative<DiagBilinear>(params_)) return x[0] * x[1];
  double sum = 0.0;
  for (std::size_t m = 0; m < amplitudes_.size(); ++m)
    sum += amplitudes_[m] * std::cos(frequencies_[m] * x[0]);
  return sum;
}

}  // namespace dysmooth
