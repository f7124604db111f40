#include "dysmooth/error.hpp"
#include "dysmooth/exact.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dysmooth;

namespace {

ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int spread) {
  std::uniform_int_distribution<int> u(-spread, spread);
  ExactMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace

TEST(Exact, SmallDeterminants) {
  EXPECT_EQ(exact_determinant(ExactMatrix{{2, 1}, {1, 3}}), 5);
  EXPECT_EQ(exact_determinant(ExactMatrix{{0, 1}, {1, 0}}), -1);  // needs a row swap
  EXPECT_EQ(exact_determinant(ExactMatrix{{1, 2}, {2, 4}}), 0);
  EXPECT_EQ(exact_determinant(ExactMatrix::identity(6)), 1);
}

TEST(Exact, DeterminantMatchesCofactorExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto m = random_matrix(rng, n, n, trial % 3 == 0 ? 1 : 9);
    EXPECT_EQ(exact_determinant(m), oracle::cofactor_det(m)) << trial;
  }
}

TEST(Exact, AdjugateMatchesCofactors) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 5;
    auto m = random_matrix(rng, n, n, 5);
    const auto adj = exact_adjugate(m);
    EXPECT_EQ(adj.det, oracle::cofactor_det(m));
    EXPECT_EQ(adj.adj, oracle::cofactor_adjugate(m)) << trial;
  }
}

TEST(Exact, AdjugateOfSingularMatrix) {
  const ExactMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  const auto adj = exact_adjugate(m);
  EXPECT_EQ(adj.det, 0);
  EXPECT_EQ(adj.adj, oracle::cofactor_adjugate(m));
}

TEST(Exact, RankMatchesRationalElimination) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + trial % 7, cols = 1 + (trial * 3) % 6;
    auto m = random_matrix(rng, rows, cols, 1);
    if (trial % 4 == 0 && rows > 1)  // force dependence
      for (std::size_t j = 0; j < cols; ++j) m(rows - 1, j) = 2 * m(0, j) - m(rows / 2, j);
    EXPECT_EQ(exact_rank(m), oracle::rational_rank(m)) << trial;
  }
}

TEST(Exact, RationalFormatting) {
  EXPECT_EQ(to_string(Rational(429, 128)), "429/128");
  EXPECT_EQ(to_string(Rational(10, 5)), "2");
  EXPECT_DOUBLE_EQ(to_double(Rational(21, 16)), 1.3125);
}
