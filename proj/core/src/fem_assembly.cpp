#include "hjbfem/fem_assembly.hpp"

#include <algorithm>

#include "hjbfem/errors.hpp"

namespace hjbfem {

namespace {

using Entries = std::array<std::array<double, 3>, 3>;

LocalMatrix scaled(ElementOrder order, MatrixKind kind, double h, double factor, const Entries& base) {
  LocalMatrix m{order, kind, h, {}};
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) m.entries[a][b] = factor * base[a][b];
  }
  return m;
}

void require_positive(double h) {
  if (!(h > 0.0)) throw InvalidInputError("element size h must be positive");
}

}  // namespace

LocalMatrix local_mass(ElementOrder order, double h) {
  require_positive(h);
  if (order == ElementOrder::P1) {
    return scaled(order, MatrixKind::Mass, h, h / 6.0, {{{2, 1, 0}, {1, 2, 0}, {0, 0, 0}}});
  }
  return scaled(order, MatrixKind::Mass, h, h / 30.0, {{{4, 2, -1}, {2, 16, 2}, {-1, 2, 4}}});
}

LocalMatrix local_stiffness(ElementOrder order, double h) {
  require_positive(h);
  if (order == ElementOrder::P1) {
    return scaled(order, MatrixKind::Stiffness, h, -1.0 / h, {{{1, -1, 0}, {-1, 1, 0}, {0, 0, 0}}});
  }
  return scaled(order, MatrixKind::Stiffness, h, -1.0 / (3.0 * h), {{{7, -8, 1}, {-8, 16, -8}, {1, -8, 7}}});
}

LocalMatrix local_convection(ElementOrder order) {
  if (order == ElementOrder::P1) {
    return scaled(order, MatrixKind::Convection, 0.0, 0.5, {{{-1, 1, 0}, {-1, 1, 0}, {0, 0, 0}}});
  }
  return scaled(order, MatrixKind::Convection, 0.0, 1.0 / 6.0, {{{-3, -4, 1}, {4, 0, -4}, {-1, 4, 3}}});
}

LocalMatrix convection_test_trial(ElementOrder order) {
  LocalMatrix m = local_convection(order);
  if (order == ElementOrder::P2) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) std::swap(m.entries[a][b], m.entries[b][a]);
    }
  }
  return m;
}

BoundaryTerms& BoundaryTerms::axpy(double alpha, const BoundaryTerms& other) {
  if (other.left.size() != left.size()) throw InvalidInputError("BoundaryTerms: size mismatch");
  for (std::size_t i = 0; i < left.size(); ++i) {
    left[i] += alpha * other.left[i];
    right[i] += alpha * other.right[i];
  }
  return *this;
}

std::vector<double> GlobalOperator::apply(std::span<const double> v, BoundaryValues g) const {
  std::vector<double> out = interior.multiply(v);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += boundary.left[i] * g.left + boundary.right[i] * g.right;
  return out;
}

double GlobalOperator::apply_row(std::size_t i, std::span<const double> v, BoundaryValues g) const {
  return interior.row_dot(i, v) + boundary.left[i] * g.left + boundary.right[i] * g.right;
}

std::vector<double> GlobalOperator::boundary_vector(BoundaryValues g) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = boundary.left[i] * g.left + boundary.right[i] * g.right;
  return out;
}

GlobalOperator& GlobalOperator::axpy(double alpha, const GlobalOperator& other) {
  interior.axpy(alpha, other.interior);
  boundary.axpy(alpha, other.boundary);
  return *this;
}

GlobalOperator& GlobalOperator::operator*=(double alpha) {
  interior *= alpha;
  for (double& v : boundary.left) v *= alpha;
  for (double& v : boundary.right) v *= alpha;
  return *this;
}

void GlobalOperator::copy_row(std::size_t i, const GlobalOperator& other) {
  interior.copy_row(i, other.interior);
  boundary.left[i] = other.boundary.left[i];
  boundary.right[i] = other.boundary.right[i];
}

void GlobalOperator::zero_row(std::size_t i) {
  interior.zero_row(i);
  boundary.left[i] = 0.0;
  boundary.right[i] = 0.0;
}

GlobalOperator GlobalOperator::zero(std::size_t n, std::size_t bandwidth) {
  return {BandedMatrix(n, bandwidth), {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}};
}

GlobalOperator GlobalOperator::from_full(const BandedMatrix& full) {
  const std::size_t n_full = full.size();
  if (n_full < 3) throw InvalidInputError("GlobalOperator::from_full: need at least one interior node");
  const std::size_t n = n_full - 2;
  const std::size_t b = full.bandwidth();
  GlobalOperator op = zero(n, b);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row = i + 1;
    const std::size_t lo = i > b ? i - b : 0;
    const std::size_t hi = std::min(n - 1, i + b);
    for (std::size_t j = lo; j <= hi; ++j) op.interior.at(i, j) = full(row, j + 1);
    op.boundary.left[i] = full(row, 0);
    op.boundary.right[i] = full(row, n_full - 1);
  }
  return op;
}

GlobalOperator operator+(GlobalOperator a, const GlobalOperator& b) { return a.axpy(1.0, b); }
GlobalOperator operator-(GlobalOperator a, const GlobalOperator& b) { return a.axpy(-1.0, b); }
GlobalOperator operator*(double alpha, GlobalOperator a) { return a *= alpha; }

BandedMatrix assemble_full(const Mesh& mesh, MatrixKind kind) {
  const std::size_t deg = static_cast<std::size_t>(mesh.degree());
  BandedMatrix full(mesh.node_count(), deg);
  const LocalMatrix convection = convection_test_trial(mesh.order());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double h = mesh.h()[e];
    LocalMatrix local = convection;
    if (kind == MatrixKind::Mass) local = local_mass(mesh.order(), h);
    if (kind == MatrixKind::Stiffness) local = local_stiffness(mesh.order(), h);
    for (std::size_t a = 0; a <= deg; ++a) {
      for (std::size_t b = 0; b <= deg; ++b) {
        full.at(mesh.global_node(e, a), mesh.global_node(e, b)) += local(a, b);
      }
    }
  }
  return full;
}

GlobalOperator assemble(const Mesh& mesh, MatrixKind kind) { return GlobalOperator::from_full(assemble_full(mesh, kind)); }

SpatialOperators assemble_operators(const Mesh& mesh) {
  return {assemble(mesh, MatrixKind::Mass), assemble(mesh, MatrixKind::Stiffness),
          assemble(mesh, MatrixKind::Convection), std::vector<double>(mesh.nodes_x().begin(), mesh.nodes_x().end())};
}

}  // namespace hjbfem
