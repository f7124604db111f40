#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace dysmooth {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dense matrix of arbitrary-precision integers, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ExactMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static ExactMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Determinant by Bareiss fraction-free elimination; every intermediate
/// division is exact.
BigInt exact_determinant(const ExactMatrix& m);

/// Adjugate together with the determinant, so that m * adj = det * I.
/// Singular matrices fall back to minor determinants.
struct Adjugate {
  ExactMatrix adj;
  BigInt det;
};
Adjugate exact_adjugate(const ExactMatrix& m);

/// Rank over the rationals (fraction-free elimination).
std::size_t exact_rank(const ExactMatrix& m);

/// "p/q" in lowest terms ("p" when q = 1).
std::string to_string(const Rational& q);
double to_double(const Rational& q);

}  // namespace dysmooth
