#include "hjbfem/banded_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hjbfem/errors.hpp"

namespace hjbfem {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), b_(bandwidth), data_(n * (2 * bandwidth + 1), 0.0) {}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::at: entry outside the band");
  return data_[index(i, j)];
}

std::vector<double> BandedMatrix::band(int offset) const {
  const std::size_t k = static_cast<std::size_t>(std::abs(offset));
  if (k > b_ || k >= n_) return {};
  std::vector<double> out(n_ - k);
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = offset >= 0 ? (*this)(r, r + k) : (*this)(r + k, r);
  }
  return out;
}

double BandedMatrix::row_dot(std::size_t i, std::span<const double> x) const {
  const std::size_t lo = i > b_ ? i - b_ : 0;
  const std::size_t hi = std::min(n_ - 1, i + b_);
  double acc = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) acc += data_[index(i, j)] * x[j];
  return acc;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  multiply_add(x, 1.0, y);
  return y;
}

void BandedMatrix::multiply_add(std::span<const double> x, double alpha, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw InvalidInputError("BandedMatrix: dimension mismatch");
  for (std::size_t i = 0; i < n_; ++i) y[i] += alpha * row_dot(i, x);
}

BandedMatrix& BandedMatrix::axpy(double alpha, const BandedMatrix& other) {
  if (other.n_ != n_ || other.b_ != b_) throw InvalidInputError("BandedMatrix: shape mismatch in axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += alpha * other.data_[k];
  return *this;
}

BandedMatrix& BandedMatrix::operator*=(double alpha) {
  for (double& v : data_) v *= alpha;
  return *this;
}

void BandedMatrix::copy_row(std::size_t i, const BandedMatrix& other) {
  if (other.n_ != n_ || other.b_ != b_) throw InvalidInputError("BandedMatrix: shape mismatch in copy_row");
  const std::size_t w = 2 * b_ + 1;
  std::copy_n(other.data_.begin() + static_cast<std::ptrdiff_t>(i * w), w,
              data_.begin() + static_cast<std::ptrdiff_t>(i * w));
}

void BandedMatrix::zero_row(std::size_t i) {
  const std::size_t w = 2 * b_ + 1;
  std::fill_n(data_.begin() + static_cast<std::ptrdiff_t>(i * w), w, 0.0);
}

BandedMatrix BandedMatrix::identity(std::size_t n, std::size_t bandwidth) {
  BandedMatrix m(n, bandwidth);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

BandedMatrix operator+(BandedMatrix a, const BandedMatrix& b) { return a += b; }
BandedMatrix operator-(BandedMatrix a, const BandedMatrix& b) { return a -= b; }
BandedMatrix operator*(double alpha, BandedMatrix a) { return a *= alpha; }

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  const std::size_t b = a.bandwidth();
  if (rhs.size() != n) throw InvalidInputError("solve_banded: rhs size mismatch");
  if (n == 0) return {};

  // Working rows hold columns i-b .. i+2b; the extra b superdiagonals absorb
  // fill-in from row interchanges.
  const std::size_t w = 3 * b + 1;
  std::vector<double> lu(n * w, 0.0);
  auto el = [&](std::size_t i, std::size_t j) -> double& { return lu[i * w + (j + b - i)]; };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > b ? i - b : 0;
    const std::size_t hi = std::min(n - 1, i + b);
    for (std::size_t j = lo; j <= hi; ++j) {
      el(i, j) = a(i, j);
      scale = std::max(scale, std::abs(a(i, j)));
    }
  }
  const double tiny = scale * 1e-14;

  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last_row = std::min(n - 1, k + b);
    const std::size_t last_col = std::min(n - 1, k + 2 * b);

    std::size_t piv = k;
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      if (std::abs(el(i, k)) > std::abs(el(piv, k))) piv = i;
    }
    if (!(std::abs(el(piv, k)) > tiny)) throw SingularMatrixError("solve_banded: zero pivot");

    if (piv != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(el(k, j), el(piv, j));
      std::swap(x[k], x[piv]);
    }

    const double pivot = el(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double l = el(i, k) / pivot;
      if (l == 0.0) continue;
      el(i, k) = 0.0;
      for (std::size_t j = k + 1; j <= last_col; ++j) el(i, j) -= l * el(k, j);
      x[i] -= l * x[k];
    }
  }

  for (std::size_t i = n; i-- > 0;) {
    const std::size_t last_col = std::min(n - 1, i + 2 * b);
    double acc = x[i];
    for (std::size_t j = i + 1; j <= last_col; ++j) acc -= el(i, j) * x[j];
    x[i] = acc / el(i, i);
  }
  return x;
}

}  // namespace hjbfem
