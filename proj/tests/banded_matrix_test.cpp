#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "hjbfem/banded_matrix.hpp"
#include "hjbfem/errors.hpp"

using namespace hjbfem;

namespace {

// Dense Gaussian elimination with partial pivoting as an independent oracle.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

BandedMatrix random_banded(std::size_t n, std::size_t b, unsigned seed, double diag_boost) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BandedMatrix a(n, b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i > b ? i - b : 0; j < n && j <= i + b; ++j) a.at(i, j) = u(rng);
    a.at(i, i) += diag_boost;
  }
  return a;
}

}  // namespace

TEST(BandedMatrix, IdentitySolveIsRhs) {
  const BandedMatrix id = BandedMatrix::identity(5, 2);
  const std::vector<double> rhs{1, -2, 3, -4, 5};
  EXPECT_EQ(solve_banded(id, rhs), rhs);
}

TEST(BandedMatrix, TwoByTwo) {
  BandedMatrix a(2, 1);
  a.at(0, 0) = 2;
  a.at(0, 1) = 1;
  a.at(1, 0) = 1;
  a.at(1, 1) = 2;
  const auto x = solve_banded(a, std::vector<double>{3, 3});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(BandedMatrix, OutOfBandIsZeroAndNotWritable) {
  BandedMatrix a(6, 1);
  EXPECT_EQ(a(0, 3), 0.0);
  EXPECT_THROW(a.at(0, 3), std::out_of_range);
}

TEST(BandedMatrix, PentadiagonalMatchesDenseOracle) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const std::size_t n = 40;
    // Weak diagonal so that pivoting actually happens.
    const BandedMatrix a = random_banded(n, 2, seed, 0.1);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dense[i][j] = a(i, j);
    }
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = std::sin(static_cast<double>(i));
    const auto x = solve_banded(a, rhs);
    const auto ref = dense_solve(dense, rhs);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12 * std::max(1.0, std::abs(ref[i])));
  }
}

TEST(BandedMatrix, ResidualIsSmall) {
  const BandedMatrix a = random_banded(500, 1, 42, 3.0);
  std::vector<double> rhs(500, 1.0);
  const auto x = solve_banded(a, rhs);
  const auto ax = a.multiply(x);
  for (std::size_t i = 0; i < rhs.size(); ++i) EXPECT_NEAR(ax[i], rhs[i], 1e-12);
}

TEST(BandedMatrix, SingularThrows) {
  BandedMatrix a(3, 1);
  a.at(0, 0) = 1;
  a.at(0, 1) = 2;
  a.at(1, 0) = 2;
  a.at(1, 1) = 4;
  a.at(2, 2) = 1;
  EXPECT_THROW(solve_banded(a, std::vector<double>{1, 2, 3}), SingularMatrixError);
}

TEST(BandedMatrix, SizeMismatchThrows) {
  EXPECT_THROW(solve_banded(BandedMatrix::identity(3, 1), std::vector<double>{1, 2}), InvalidInputError);
}

TEST(BandedMatrix, ArithmeticAndRows) {
  BandedMatrix a = BandedMatrix::identity(4, 1);
  const BandedMatrix b = 2.0 * a;
  EXPECT_EQ((b - a), a);
  EXPECT_EQ((a + a), b);
  a.at(1, 2) = 5.0;
  EXPECT_DOUBLE_EQ(a.row_dot(1, std::vector<double>{0, 1, 1, 0}), 6.0);
  BandedMatrix c = BandedMatrix::identity(4, 1);
  c.copy_row(1, a);
  EXPECT_DOUBLE_EQ(c(1, 2), 5.0);
  c.zero_row(1);
  EXPECT_DOUBLE_EQ(c(1, 1), 0.0);
  EXPECT_EQ(a.band(1), (std::vector<double>{0, 5, 0}));
}
