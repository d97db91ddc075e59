#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hjbfem/fem_assembly.hpp"
#include "hjbfem/hjb_policy.hpp"
#include "hjbfem/market_model.hpp"
#include "hjbfem/mesh.hpp"

namespace hjbfem {

enum class Method { Fdm, P1, P2 };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct TimeStep {
  double theta;
  double dt;
};

/// Uniform time grid in tau = T - t; the first `rannacher_steps` steps are
/// fully implicit, the rest use `theta` (Crank-Nicolson by default).
struct TimeGrid {
  int steps = 0;
  double dt = 0.0;
  int rannacher_steps = 0;
  double theta = 0.5;
  std::vector<TimeStep> schedule;
};

TimeGrid rannacher_schedule(int steps, int rannacher_steps, double maturity, double theta = 0.5);

/// Stopping parameters of the policy iteration.
struct SolverConfig {
  double tol = 1e-7;
  double scale = 1.0;  // floor of the relative-change denominator
  int max_iter = 50;

  void validate() const;
};

struct PricerConfig {
  SolverConfig solver;
  int rannacher_steps = 2;
  double theta = 0.5;
};

/// Rate of the linear part: r_b for the long position, r_l for the short one
/// (the rate the control term is measured against).
double base_rate(const MarketParams& params, Position position);

/// Linear part of the semi-discrete system M v' = -A v + P v with
/// A = -(sigma^2/2) K - (r - sigma^2/2) N + r M, r = base_rate().
GlobalOperator linear_operator(const SpatialOperators& ops, const MarketParams& params, Position position);

struct StepMatrices {
  GlobalOperator implicit_side;  // M + theta dt (A - P)
  GlobalOperator explicit_side;  // M - (1 - theta) dt (A - P)
};

StepMatrices step_matrices(const SpatialOperators& ops, const GlobalOperator& policy_matrix, const MarketParams& params,
                           Position position, double theta, double dt);

/// Everything about a discretization that stays fixed across time steps.
struct Discretization {
  SpatialOperators ops;
  ControlOperators controls;
  GlobalOperator linear;
  MarketParams params;

  Discretization(SpatialOperators spatial, const MarketParams& p, Position position);
};

enum class StopReason { SolutionChange = 1, PolicyChange = 2 };

struct NewtonResult {
  std::vector<double> v;  // interior values at the new level
  int iterations = 0;
  StopReason reason = StopReason::SolutionChange;
  double residual = 0.0;  // value of the criterion that stopped the loop
};

/// One time step m -> m+1 with the policy iteration: re-select the control
/// from the latest iterate, solve the theta-scheme system, stop on a small
/// relative change of the iterate or of P v. Throws NonConvergenceError
/// after max_iter iterations.
NewtonResult policy_newton_step(const Discretization& disc, std::span<const double> v_prev, BoundaryValues g_prev,
                                BoundaryValues g_next, const SolverConfig& config, double theta, double dt,
                                int step_index = 0);

/// Nodal option values per time level plus iteration statistics.
/// values[m] is the full nodal vector (boundaries included) at tau = m dt,
/// so values[0] is the payoff and values.back() is t = 0.
struct SolutionGrid {
  Mesh mesh;
  Method method = Method::P2;
  Position position = Position::Long;
  MarketParams params;
  TimeGrid time;
  std::vector<std::vector<double>> values;
  std::vector<int> iterations_per_step;
  int total_iterations = 0;
  double wall_time = 0.0;
  bool converged = true;

  std::size_t levels() const noexcept { return values.size(); }
  std::span<const double> at_level(std::size_t m) const { return values.at(m); }
  std::span<const double> today() const { return values.back(); }
  double average_iterations() const;
  /// Interpolated value at S (t = 0).
  double value_at(double s) const;
};

/// Time loop over an already discretized problem. `mesh` supplies the nodes
/// and the interpolant used to read off values.
SolutionGrid march(const Discretization& disc, const Mesh& mesh, Method method, Position position, int steps,
                   const PricerConfig& config);

/// Prices the straddle with FEM (P1/P2 on the uniform-in-S mesh) or the FDM
/// benchmark (n intervals, uniform in S unless run_fdm is called directly).
SolutionGrid run_pricer(const MarketParams& params, Position position, Method method, int elements, int steps,
                        const PricerConfig& config = {});

}  // namespace hjbfem
