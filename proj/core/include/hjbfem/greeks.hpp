#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hjbfem/mesh.hpp"
#include "hjbfem/solver.hpp"

namespace hjbfem {

/// Per-node sensitivities in S-space at one time level.
struct GreeksGrid {
  std::vector<double> s;
  std::vector<double> delta;  // dV/dS
  std::vector<double> gamma;  // d2V/dS2
  std::vector<double> theta;  // dV/dt (calendar time), per year
};

/// Nodal dV/dx recovered from the interpolant. P1: slope of the quadratic
/// through the node and its two neighbours (one-sided at the ends). P2: exact derivative of the local quadratic (vertex values
/// averaged over the two elements that share it).
std::vector<double> nodal_dx(std::span<const double> values, const Mesh& mesh);
/// Nodal d2V/dx2. P1: three-point second difference; P2: the element's
/// constant second derivative (averaged at shared vertices).
std::vector<double> nodal_dxx(std::span<const double> values, const Mesh& mesh);

/// delta = V_x / S
std::vector<double> compute_delta(std::span<const double> values, const Mesh& mesh);
/// gamma = (V_xx - V_x) / S^2
std::vector<double> compute_gamma(std::span<const double> values, const Mesh& mesh);
/// theta = -(v^m - v^{m-1}) / dt at level m >= 1.
std::vector<double> compute_theta(const SolutionGrid& solution, std::size_t level);

/// All three Greeks at `level` (default: t = 0).
GreeksGrid compute_greeks(const SolutionGrid& solution, std::size_t level);
GreeksGrid compute_greeks(const SolutionGrid& solution);

struct PointGreeks {
  double value;
  double delta;
  double gamma;
  double theta;
};

/// Greeks at an arbitrary S at t = 0: the value comes from the interpolant,
/// the sensitivities from the recovered nodal Greeks, linear in x between
/// nodes. At a node this agrees with compute_greeks().
PointGreeks greeks_at(const SolutionGrid& solution, double s);

}  // namespace hjbfem
