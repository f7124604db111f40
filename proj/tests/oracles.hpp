#pragma once

// Independent slow reimplementations used as test oracles.

#include "dysmooth/exact.hpp"
#include "dysmooth/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

struct NaiveModulus {
  double value = 0.0;
  double argmax_value = 0.0;  // signed difference at the first maximiser
};

inline long long choose(int r, int k) {
  long long c = 1;
  for (int j = 1; j <= k; ++j) c = c * (r - k + j) / j;
  return c;
}

// Brute force over every axis and every mesh point, differences in plain
// left-to-right summation with the binomials recomputed per term.
inline NaiveModulus naive_modulus(const std::vector<double>& values, int d, int n, int r) {
  const long long side = (1LL << n) + 1;
  long long total = 1;
  for (int j = 0; j < d; ++j) total *= side;
  NaiveModulus best;
  bool found = false;
  for (int axis = 0; axis < d; ++axis) {
    long long stride = 1;
    for (int j = d - 1; j > axis; --j) stride *= side;
    for (long long p = 0; p < total; ++p) {
      const long long coord = (p / stride) % side;
      if (coord + r > side - 1) continue;
      double diff = 0.0;
      for (int k = 0; k <= r; ++k)
        diff += ((r - k) % 2 ? -1.0 : 1.0) * static_cast<double>(choose(r, k)) *
                values[static_cast<std::size_t>(p + k * stride)];
      if (!found || std::abs(diff) > best.value) {
        best.value = std::abs(diff);
        best.argmax_value = diff;
        found = true;
      }
    }
  }
  return best;
}

using dysmooth::BigInt;
using dysmooth::ExactMatrix;
using dysmooth::Rational;

inline ExactMatrix minor_of(const ExactMatrix& m, std::size_t row, std::size_t col) {
  ExactMatrix out(m.rows() - 1, m.cols() - 1);
  for (std::size_t i = 0, oi = 0; i < m.rows(); ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, oj = 0; j < m.cols(); ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

// Laplace expansion along the first row.
inline BigInt cofactor_det(const ExactMatrix& m) {
  if (m.rows() == 0) return 1;
  if (m.rows() == 1) return m(0, 0);
  BigInt sum = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (m(0, j) == 0) continue;
    const BigInt c = m(0, j) * cofactor_det(minor_of(m, 0, j));
    sum += (j % 2 ? -c : c);
  }
  return sum;
}

inline ExactMatrix cofactor_adjugate(const ExactMatrix& m) {
  ExactMatrix adj(m.rows(), m.cols());
  if (m.rows() == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const BigInt c = cofactor_det(minor_of(m, i, j));
      adj(j, i) = (i + j) % 2 ? BigInt(-c) : c;
    }
  return adj;
}

// Gaussian elimination over the rationals.
inline std::size_t rational_rank(const ExactMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = Rational(m(i, j));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && a[pivot][col] == 0) ++pivot;
    if (pivot == m.rows()) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || a[i][col] == 0) continue;
      const Rational f = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < m.cols(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace oracle
