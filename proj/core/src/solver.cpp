#include "hjbfem/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "hjbfem/errors.hpp"
#include "hjbfem/fdm.hpp"

namespace hjbfem {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Fdm:
      return "fdm";
    case Method::P1:
      return "p1";
    case Method::P2:
      return "p2";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "fdm") return Method::Fdm;
  if (s == "p1") return Method::P1;
  if (s == "p2") return Method::P2;
  throw InvalidInputError("unknown method '" + std::string(s) + "' (expected fdm|p1|p2)");
}

TimeGrid rannacher_schedule(int steps, int rannacher_steps, double maturity, double theta) {
  if (steps < 1) throw InvalidInputError("rannacher_schedule: need N_t >= 1");
  if (rannacher_steps < 0 || rannacher_steps > steps) {
    throw InvalidInputError("rannacher_schedule: need 0 <= rannacher steps <= N_t");
  }
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidInputError("rannacher_schedule: theta must lie in [0, 1]");
  if (!(maturity > 0.0)) throw InvalidInputError("rannacher_schedule: maturity must be positive");

  TimeGrid grid{steps, maturity / steps, rannacher_steps, theta, {}};
  grid.schedule.reserve(static_cast<std::size_t>(steps));
  for (int m = 0; m < steps; ++m) grid.schedule.push_back({m < rannacher_steps ? 1.0 : theta, grid.dt});
  return grid;
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidInputError("SolverConfig: tol must be positive");
  if (!(scale > 0.0)) throw InvalidInputError("SolverConfig: scale must be positive");
  if (max_iter < 1) throw InvalidInputError("SolverConfig: max_iter must be >= 1");
}

double base_rate(const MarketParams& params, Position position) {
  return position == Position::Long ? params.r_b : params.r_l;
}

GlobalOperator linear_operator(const SpatialOperators& ops, const MarketParams& params, Position position) {
  const double half_var = 0.5 * params.sigma * params.sigma;
  const double r = base_rate(params, position);
  GlobalOperator a = -half_var * ops.stiffness;
  a.axpy(-(r - half_var), ops.convection);
  a.axpy(r, ops.mass);
  return a;
}

namespace {

StepMatrices step_from_linear(const GlobalOperator& mass, const GlobalOperator& linear,
                              const GlobalOperator& policy_matrix, double theta, double dt) {
  GlobalOperator spatial = linear - policy_matrix;
  GlobalOperator implicit_side = mass;
  implicit_side.axpy(theta * dt, spatial);
  GlobalOperator explicit_side = mass;
  explicit_side.axpy(-(1.0 - theta) * dt, spatial);
  return {std::move(implicit_side), std::move(explicit_side)};
}

GlobalOperator implicit_matrix(const Discretization& disc, const GlobalOperator& policy_matrix, double theta,
                               double dt) {
  GlobalOperator a = disc.ops.mass;
  a.axpy(theta * dt, disc.linear);
  a.axpy(-theta * dt, policy_matrix);
  return a;
}

}  // namespace

StepMatrices step_matrices(const SpatialOperators& ops, const GlobalOperator& policy_matrix, const MarketParams& params,
                           Position position, double theta, double dt) {
  if (!(dt > 0.0)) throw InvalidInputError("step_matrices: dt must be positive");
  return step_from_linear(ops.mass, linear_operator(ops, params, position), policy_matrix, theta, dt);
}

Discretization::Discretization(SpatialOperators spatial, const MarketParams& p, Position position)
    : ops(std::move(spatial)),
      controls(build_control_operators(ops, p, position)),
      linear(linear_operator(ops, p, position)),
      params(p) {}

NewtonResult policy_newton_step(const Discretization& disc, std::span<const double> v_prev, BoundaryValues g_prev,
                                BoundaryValues g_next, const SolverConfig& config, double theta, double dt,
                                int step_index) {
  const std::size_t n = disc.ops.mass.size();
  if (v_prev.size() != n) throw InvalidInputError("policy_newton_step: value vector size mismatch");

  // Explicit half uses the control that is optimal at the old level.
  const PolicyMatrix p_old = build_policy_matrix(disc.controls, select_policy(disc.controls, v_prev, g_prev));
  GlobalOperator explicit_side = disc.ops.mass;
  explicit_side.axpy(-(1.0 - theta) * dt, disc.linear);
  explicit_side.axpy((1.0 - theta) * dt, p_old.matrix);
  const std::vector<double> rhs_base = explicit_side.apply(v_prev, g_prev);

  std::vector<double> v_last(v_prev.begin(), v_prev.end());
  GlobalOperator p_last = p_old.matrix;

  for (int k = 1; k <= config.max_iter; ++k) {
    const GlobalOperator lhs = implicit_matrix(disc, p_last, theta, dt);
    // Boundary columns of the new level (mass and theta part) move to the right-hand side.
    std::vector<double> rhs = rhs_base;
    const std::vector<double> lifted = lhs.boundary_vector(g_next);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= lifted[i];
    std::vector<double> v = solve_banded(lhs.interior, rhs);

    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      change = std::max(change, std::abs(v[j] - v_last[j]) / std::max(config.scale, std::abs(v[j])));
    }
    if (change < config.tol) return {std::move(v), k, StopReason::SolutionChange, change};

    const PolicyMatrix p_new = build_policy_matrix(disc.controls, select_policy(disc.controls, v, g_next));
    double policy_change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double old_row = p_last.apply_row(j, v, g_next);
      const double new_row = p_new.matrix.apply_row(j, v, g_next);
      policy_change = std::max(policy_change, std::abs(old_row - new_row) / std::max(config.scale, std::abs(new_row)));
    }
    if (policy_change < config.tol) return {std::move(v), k, StopReason::PolicyChange, policy_change};

    v_last = std::move(v);
    p_last = p_new.matrix;
  }

  throw NonConvergenceError("policy iteration did not converge within " + std::to_string(config.max_iter) +
                                " iterations at time step " + std::to_string(step_index),
                            std::move(v_last), step_index);
}

double SolutionGrid::average_iterations() const {
  return iterations_per_step.empty() ? 0.0
                                     : static_cast<double>(total_iterations) /
                                           static_cast<double>(iterations_per_step.size());
}

double SolutionGrid::value_at(double s) const { return strike_node_value(today(), mesh, s).value; }

SolutionGrid march(const Discretization& disc, const Mesh& mesh, Method method, Position position, int steps,
                   const PricerConfig& config) {
  config.solver.validate();
  const MarketParams& params = disc.params;
  const auto start = std::chrono::steady_clock::now();

  SolutionGrid out{mesh, method, position, params,
                   rannacher_schedule(steps, config.rannacher_steps, params.maturity, config.theta),
                   {}, {}, 0, 0.0, true};
  out.values.reserve(static_cast<std::size_t>(steps) + 1);
  out.iterations_per_step.reserve(static_cast<std::size_t>(steps));

  const std::size_t n_nodes = mesh.node_count();
  std::vector<double> u(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) u[i] = straddle_payoff(mesh.nodes_s()[i], params.strike);
  out.values.push_back(u);

  std::vector<double> v(u.begin() + 1, u.end() - 1);
  double tau = 0.0;
  for (int m = 0; m < steps; ++m) {
    const TimeStep& step = out.time.schedule[static_cast<std::size_t>(m)];
    const BoundaryValues g_prev = boundary_values(params, tau);
    const double tau_next = m + 1 == steps ? params.maturity : tau + step.dt;
    const BoundaryValues g_next = boundary_values(params, tau_next);

    NewtonResult r = policy_newton_step(disc, v, g_prev, g_next, config.solver, step.theta, step.dt, m + 1);
    v = std::move(r.v);
    out.iterations_per_step.push_back(r.iterations);
    out.total_iterations += r.iterations;

    u.front() = g_next.left;
    u.back() = g_next.right;
    std::copy(v.begin(), v.end(), u.begin() + 1);
    out.values.push_back(u);
    tau = tau_next;
  }

  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SolutionGrid run_pricer(const MarketParams& params, Position position, Method method, int elements, int steps,
                        const PricerConfig& config) {
  params.validate();
  if (steps < 1) throw InvalidInputError("run_pricer: N_t must be >= 1");
  if (method == Method::Fdm) return run_fdm(params, position, elements, steps, config);

  const auto start = std::chrono::steady_clock::now();
  const Mesh mesh = build_mesh(params, elements, method == Method::P1 ? ElementOrder::P1 : ElementOrder::P2);
  const Discretization disc(assemble_operators(mesh), params, position);
  SolutionGrid out = march(disc, mesh, method, position, steps, config);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace hjbfem
