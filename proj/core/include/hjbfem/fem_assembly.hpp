#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hjbfem/banded_matrix.hpp"
#include "hjbfem/market_model.hpp"
#include "hjbfem/mesh.hpp"

namespace hjbfem {

enum class MatrixKind { Mass, Stiffness, Convection };

/// Closed-form element matrix on one element of size h.
struct LocalMatrix {
  ElementOrder order;
  MatrixKind kind;
  double h;
  std::array<std::array<double, 3>, 3> entries{};  // only the leading 2x2 block is used for P1

  std::size_t size() const noexcept { return order == ElementOrder::P1 ? 2 : 3; }
  double operator()(std::size_t a, std::size_t b) const noexcept { return entries[a][b]; }
};

/// (h/6)[[2,1],[1,2]] for P1, (h/30)[[4,2,-1],[2,16,2],[-1,2,4]] for P2.
LocalMatrix local_mass(ElementOrder order, double h);
/// Carries the leading minus sign: -(1/h)[[1,-1],[-1,1]] for P1,
/// -(1/(3h))[[7,-8,1],[-8,16,-8],[1,-8,7]] for P2.
LocalMatrix local_stiffness(ElementOrder order, double h);
/// Published convection matrices, independent of h:
/// (1/2)[[-1,1],[-1,1]] for P1, (1/6)[[-3,-4,1],[4,0,-4],[-1,4,3]] for P2.
///
/// The P1 matrix is laid out as int(psi_a * psi_b'); the P2 one as
/// int(psi_a' * psi_b). Assembly always places int(psi_test * psi_trial')
/// at (test, trial), see convection_test_trial().
LocalMatrix local_convection(ElementOrder order);

/// int(psi_a * psi_b') with a the test and b the trial function.
LocalMatrix convection_test_trial(ElementOrder order);

/// Columns of the eliminated Dirichlet nodes, restricted to interior rows.
/// Only the first/last `bandwidth` entries can be nonzero.
struct BoundaryTerms {
  std::vector<double> left;
  std::vector<double> right;

  BoundaryTerms& axpy(double alpha, const BoundaryTerms& other);
};

/// An interior operator together with its boundary columns, so that for a full
/// nodal vector u = (g_left, v, g_right):
///   (A_full u)_interior = interior * v + left * g_left + right * g_right.
struct GlobalOperator {
  BandedMatrix interior;
  BoundaryTerms boundary;

  std::size_t size() const noexcept { return interior.size(); }

  std::vector<double> apply(std::span<const double> v, BoundaryValues g) const;
  double apply_row(std::size_t i, std::span<const double> v, BoundaryValues g) const;
  /// Boundary contribution left * g_left + right * g_right.
  std::vector<double> boundary_vector(BoundaryValues g) const;

  GlobalOperator& axpy(double alpha, const GlobalOperator& other);
  GlobalOperator& operator*=(double alpha);

  void copy_row(std::size_t i, const GlobalOperator& other);
  void zero_row(std::size_t i);

  static GlobalOperator zero(std::size_t n, std::size_t bandwidth);
  /// Splits a full nodal matrix into interior block and boundary columns.
  static GlobalOperator from_full(const BandedMatrix& full);
};

GlobalOperator operator+(GlobalOperator a, const GlobalOperator& b);
GlobalOperator operator-(GlobalOperator a, const GlobalOperator& b);
GlobalOperator operator*(double alpha, GlobalOperator a);

/// Full nodal matrix (boundary rows/columns kept), element-wise sum of local
/// matrices using each element's own h.
BandedMatrix assemble_full(const Mesh& mesh, MatrixKind kind);

/// Global operator with Dirichlet rows/columns eliminated.
GlobalOperator assemble(const Mesh& mesh, MatrixKind kind);

/// Mass, stiffness and first-derivative operators on a common set of nodes.
/// Shared by the Galerkin and finite-difference discretizations.
struct SpatialOperators {
  GlobalOperator mass;
  GlobalOperator stiffness;   // discretizes V_xx (Galerkin: -int psi' psi')
  GlobalOperator convection;  // discretizes V_x
  std::vector<double> nodes_x;
};

SpatialOperators assemble_operators(const Mesh& mesh);

}  // namespace hjbfem
