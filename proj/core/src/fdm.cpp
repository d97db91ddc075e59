#include "hjbfem/fdm.hpp"

#include <chrono>
#include <cmath>

#include "hjbfem/errors.hpp"

namespace hjbfem {

FdmGrid build_fdm_grid(const MarketParams& params, int intervals, FdmSpacing spacing) {
  if (intervals < 2) throw InvalidInputError("build_fdm_grid: need at least 2 intervals");
  params.validate();
  const double x_lo = to_log(params.s_min, params.strike);
  const double x_hi = to_log(params.s_max, params.strike);
  const auto n = static_cast<std::size_t>(intervals);

  FdmGrid grid{std::vector<double>(n + 1), spacing};
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    grid.nodes_x[i] = spacing == FdmSpacing::UniformX
                          ? x_lo + t * (x_hi - x_lo)
                          : to_log(params.s_min + t * (params.s_max - params.s_min), params.strike);
  }
  grid.nodes_x.front() = x_lo;
  grid.nodes_x.back() = x_hi;
  return grid;
}

Mesh fdm_mesh(const FdmGrid& grid, double strike) { return Mesh(ElementOrder::P1, grid.nodes_x, strike); }

SpatialOperators fdm_spatial_operators(const FdmGrid& grid) {
  const std::size_t n = grid.node_count();
  BandedMatrix mass = BandedMatrix::identity(n, 1);
  BandedMatrix second(n, 1);
  BandedMatrix first(n, 1);
  // Boundary rows stay zero; they are dropped by from_full.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (grid.spacing == FdmSpacing::UniformS) {
      // Central differences in S, mapped by V_x = S V_S, V_xx = S^2 V_SS + S V_S.
      const double s_m = std::exp(grid.nodes_x[i - 1]);
      const double s_i = std::exp(grid.nodes_x[i]);
      const double s_p = std::exp(grid.nodes_x[i + 1]);
      const double ds = 0.5 * (s_p - s_m);
      const double d1 = s_i / (2.0 * ds);
      const double d2 = s_i * s_i / (ds * ds);
      first.at(i, i - 1) = -d1;
      first.at(i, i + 1) = d1;
      second.at(i, i - 1) = d2 - d1;
      second.at(i, i) = -2.0 * d2;
      second.at(i, i + 1) = d2 + d1;
      continue;
    }
    const double hm = grid.nodes_x[i] - grid.nodes_x[i - 1];
    const double hp = grid.nodes_x[i + 1] - grid.nodes_x[i];
    const double sum = hm + hp;
    second.at(i, i - 1) = 2.0 / (hm * sum);
    second.at(i, i) = -2.0 / (hm * hp);
    second.at(i, i + 1) = 2.0 / (hp * sum);
    first.at(i, i - 1) = -hp / (hm * sum);
    first.at(i, i) = (hp - hm) / (hm * hp);
    first.at(i, i + 1) = hm / (hp * sum);
  }
  return {GlobalOperator::from_full(mass), GlobalOperator::from_full(second), GlobalOperator::from_full(first),
          grid.nodes_x};
}

FdmOperators build_fdm_operators(const FdmGrid& grid, const MarketParams& params, Position position) {
  const SpatialOperators ops = fdm_spatial_operators(grid);
  const double half_var = 0.5 * params.sigma * params.sigma;
  const double r = base_rate(params, position);
  ControlOperators controls = build_control_operators(ops, params, position);
  return {half_var * ops.stiffness, (r - half_var) * ops.convection, -r * ops.mass,
          std::move(controls.op1), std::move(controls.op2)};
}

SolutionGrid run_fdm(const MarketParams& params, Position position, int intervals, int steps,
                     const PricerConfig& config, FdmSpacing spacing) {
  const auto start = std::chrono::steady_clock::now();
  const FdmGrid grid = build_fdm_grid(params, intervals, spacing);
  const Mesh mesh = fdm_mesh(grid, params.strike);
  const Discretization disc(fdm_spatial_operators(grid), params, position);
  SolutionGrid out = march(disc, mesh, Method::Fdm, position, steps, config);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace hjbfem
