#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hjbfem {

/// Square matrix with equal lower and upper bandwidth.
///
/// Bandwidth 1 holds the tridiagonal P1/FDM operators, bandwidth 2 the
/// pentadiagonal P2 ones. Entries outside the band are implicitly zero.
/// Storage is row-major: row i keeps columns i-b .. i+b.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t n, std::size_t bandwidth);

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return b_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return i < n_ && j < n_ && (i > j ? i - j : j - i) <= b_;
  }

  /// Entry (i, j); zero outside the band.
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return in_band(i, j) ? data_[index(i, j)] : 0.0;
  }

  /// Mutable in-band entry. Throws std::out_of_range outside the band.
  double& at(std::size_t i, std::size_t j);

  /// Diagonal at `offset` (0 main, +k super, -k sub), length n - |offset|.
  std::vector<double> band(int offset) const;

  std::vector<double> multiply(std::span<const double> x) const;
  /// y += alpha * A x
  void multiply_add(std::span<const double> x, double alpha, std::span<double> y) const;
  /// (A x)_i for one row.
  double row_dot(std::size_t i, std::span<const double> x) const;

  /// this += alpha * other (same size and bandwidth).
  BandedMatrix& axpy(double alpha, const BandedMatrix& other);
  BandedMatrix& operator*=(double alpha);
  BandedMatrix& operator+=(const BandedMatrix& other) { return axpy(1.0, other); }
  BandedMatrix& operator-=(const BandedMatrix& other) { return axpy(-1.0, other); }

  /// Copies row i of `other` into row i of this matrix.
  void copy_row(std::size_t i, const BandedMatrix& other);
  void zero_row(std::size_t i);

  static BandedMatrix identity(std::size_t n, std::size_t bandwidth);

  friend bool operator==(const BandedMatrix&, const BandedMatrix&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * (2 * b_ + 1) + (j + b_ - i); }

  std::size_t n_ = 0;
  std::size_t b_ = 0;
  std::vector<double> data_;
};

BandedMatrix operator+(BandedMatrix a, const BandedMatrix& b);
BandedMatrix operator-(BandedMatrix a, const BandedMatrix& b);
BandedMatrix operator*(double alpha, BandedMatrix a);

/// Direct solve of A x = rhs by banded Gaussian elimination with partial
/// pivoting (fill-in confined to 2b superdiagonals). O(n b^2) work.
/// Throws SingularMatrixError on a vanishing pivot.
std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> rhs);

}  // namespace hjbfem
