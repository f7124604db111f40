#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dysmooth {

/// Built-in test functions on I^d. Each entry is deterministic and has a
/// known regularity profile: polynomial, axis kink, off-axis point
/// singularity, bilinear, and a truncated Weierstrass sum.
class CatalogFunction {
 public:
  struct Monomial {
    double coefficient = 0.0;
    std::vector<int> exponents;  // one per axis
  };
  /// sum of coefficient * prod_j x_j^{e_j}
  struct Poly {
    std::vector<Monomial> terms;
  };
  /// |x_axis - center|^alpha
  struct AbsPower {
    int axis = 0;
    double center = 0.5;
    double alpha = 1.0;
  };
  /// ||x - center||_2^alpha
  struct RadialPower {
    std::vector<double> center;
    double alpha = 1.0;
  };
  /// x_1 * x_2
  struct DiagBilinear {};
  /// sum_{m=0}^{terms} a^m cos(b^m pi x_1)
  struct Weierstrass {
    double a = 0.5;
    double b = 3.0;
    int terms = 12;
  };
  using Params = std::variant<Poly, AbsPower, RadialPower, DiagBilinear, Weierstrass>;

  static CatalogFunction poly(int d, std::vector<Monomial> terms);
  static CatalogFunction abs_power(int d, int axis, double center, double alpha);
  static CatalogFunction radial_power(int d, std::vector<double> center, double alpha);
  static CatalogFunction diag_bilinear(int d);
  static CatalogFunction weierstrass(int d, double a, double b, int terms);

  int dimension() const noexcept { return d_; }
  const Params& params() const noexcept { return params_; }
  /// Catalog name as used on the command line ("poly", "abs-power", ...).
  std::string name() const;

  double operator()(std::span<const double> x) const;

 private:
  CatalogFunction(int d, Params params) : d_(d), params_(std::move(params)) {}

  int d_;
  Params params_;
  // Weierstrass amplitudes a^m and frequencies b^m pi, precomputed.
  std::vector<double> amplitudes_;
  std::vector<double> frequencies_;
};

}  // namespace dysmooth
