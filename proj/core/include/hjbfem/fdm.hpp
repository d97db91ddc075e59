#pragma once

#include <cstddef>
#include <vector>

#include "hjbfem/fem_assembly.hpp"
#include "hjbfem/market_model.hpp"
#include "hjbfem/mesh.hpp"
#include "hjbfem/solver.hpp"

namespace hjbfem {

/// UniformS: nodes are the log-images of uniformly spaced S-points (the
/// benchmark grid, K is a node whenever the FEM mesh has it). UniformX: nodes
/// uniformly spaced in x.
enum class FdmSpacing { UniformS, UniformX };

/// Finite-difference nodes on [x_min, x_max]: `intervals` + 1 points.
struct FdmGrid {
  std::vector<double> nodes_x;
  FdmSpacing spacing = FdmSpacing::UniformS;

  std::size_t node_count() const noexcept { return nodes_x.size(); }
  std::size_t intervals() const noexcept { return nodes_x.size() - 1; }
};

FdmGrid build_fdm_grid(const MarketParams& params, int intervals, FdmSpacing spacing = FdmSpacing::UniformS);

/// Mesh view of the grid (P1 on the same nodes), used for interpolation and Greeks.
Mesh fdm_mesh(const FdmGrid& grid, double strike);

/// Identity mass, second-difference "stiffness" and central first difference.
/// UniformS grids use central differences in S mapped to x by the chain rule;
/// UniformX grids use three-point stencils in x.
SpatialOperators fdm_spatial_operators(const FdmGrid& grid);

/// Coefficient-weighted FDM operators of the transformed PDE.
struct FdmOperators {
  GlobalOperator diffusion;   // (sigma^2/2) d2/dx2
  GlobalOperator convection;  // (r - sigma^2/2) d/dx, r = base_rate()
  GlobalOperator reaction;    // -r I
  GlobalOperator op1;
  GlobalOperator op2;
};

FdmOperators build_fdm_operators(const FdmGrid& grid, const MarketParams& params, Position position);

SolutionGrid run_fdm(const MarketParams& params, Position position, int intervals, int steps,
                     const PricerConfig& config = {}, FdmSpacing spacing = FdmSpacing::UniformS);

}  // namespace hjbfem
