#include "dysmooth/exact.hpp"

#include "dysmooth/error.hpp"

#include <utility>

namespace dysmooth {

ExactMatrix::ExactMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw validation_error("shape", "ragged matrix literal");
    for (long long v : row) data_.emplace_back(v);
  }
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

namespace {

void swap_rows(ExactMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace

BigInt exact_determinant(const ExactMatrix& input) {
  if (!input.square()) throw validation_error("shape", "determinant of a non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  ExactMatrix m = input;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      swap_rows(m, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

// Singular input: adj(j, i) = (-1)^{i+j} det(minor(i, j)), one Bareiss run per entry.
Adjugate cofactor_adjugate(const ExactMatrix& input) {
  const std::size_t n = input.rows();
  Adjugate out{ExactMatrix(n, n), 0};
  if (n == 1) {
    out.adj(0, 0) = 1;
    out.det = input(0, 0);
    return out;
  }
  ExactMatrix minor(n - 1, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t a = 0, ma = 0; a < n; ++a) {
        if (a == i) continue;
        for (std::size_t b = 0, mb = 0; b < n; ++b)
          if (b != j) minor(ma, mb++) = input(a, b);
        ++ma;
      }
      const BigInt c = exact_determinant(minor);
      out.adj(j, i) = (i + j) % 2 ? BigInt(-c) : c;
    }
  return out;
}

}  // namespace

Adjugate exact_adjugate(const ExactMatrix& input) {
  if (!input.square()) throw validation_error("shape", "adjugate of a non-square matrix");
  const std::size_t n = input.rows();
  // Integer-preserving Gauss-Jordan on [A | I]; ends at [delta I | E] with
  // E A = delta I, delta = det(P A).
  ExactMatrix m(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = input(i, j);
    m(i, n + i) = 1;
  }
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return cofactor_adjugate(input);
      swap_rows(m, k, p);
      sign = -sign;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  Adjugate out{ExactMatrix(n, n), sign * prev};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.adj(i, j) = sign * m(i, n + j);
  // A * adj must equal det * I exactly.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      BigInt s = 0;
      for (std::size_t l = 0; l < n; ++l) s += input(i, l) * out.adj(l, j);
      if (s != (i == j ? out.det : BigInt(0))) throw invariant_error("adjugate check A * adj = det * I failed");
    }
  }
  return out;
}

std::size_t exact_rank(const ExactMatrix& input) {
  ExactMatrix m = input;
  BigInt prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row) swap_rows(m, row, p);
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j) m(i, j) = (m(row, col) * m(i, j) - m(i, col) * m(row, j)) / prev;
      m(i, col) = 0;
    }
    prev = m(row, col);
    ++row;
  }
  return row;
}

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace dysmooth
