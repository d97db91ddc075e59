#include "hjbfem/greeks.hpp"

#include <algorithm>

#include "hjbfem/errors.hpp"

namespace hjbfem {

namespace {

void check_size(std::span<const double> values, const Mesh& mesh) {
  if (values.size() != mesh.node_count()) throw InvalidInputError("greeks: value count does not match the mesh");
}

double linear_interp(const Mesh& mesh, std::span<const double> nodal, double x) {
  // Interpolates nodal data linearly between the two nearest nodes in x.
  const auto xs = mesh.nodes_x();
  auto it = std::lower_bound(xs.begin() + 1, xs.end() - 1, x);
  const std::size_t r = static_cast<std::size_t>(it - xs.begin());
  const std::size_t l = r - 1;
  const double t = (x - xs[l]) / (xs[r] - xs[l]);
  return nodal[l] + t * (nodal[r] - nodal[l]);
}

}  // namespace

std::vector<double> nodal_dx(std::span<const double> values, const Mesh& mesh) {
  check_size(values, mesh);
  const std::size_t ne = mesh.element_count();
  const auto bounds = mesh.element_bounds();
  std::vector<double> out(mesh.node_count(), 0.0);

  if (mesh.order() == ElementOrder::P1) {
    std::vector<double> slope(ne);
    for (std::size_t e = 0; e < ne; ++e) slope[e] = (values[e + 1] - values[e]) / mesh.h()[e];
    out.front() = slope.front();
    out.back() = slope.back();
    // Derivative of the quadratic through nodes i-1, i, i+1.
    const auto h = mesh.h();
    for (std::size_t i = 1; i < ne; ++i) {
      out[i] = (h[i] * slope[i - 1] + h[i - 1] * slope[i]) / (h[i - 1] + h[i]);
    }
    return out;
  }

  for (std::size_t e = 0; e < ne; ++e) {
    const double left = evaluate_interpolant(mesh, values, bounds[e]).dx;
    const double mid = evaluate_interpolant(mesh, values, 0.5 * (bounds[e] + bounds[e + 1])).dx;
    // Derivative at the right end of element e from element e's own polynomial.
    const double h = mesh.h()[e];
    const double right = (values[2 * e] - 4.0 * values[2 * e + 1] + 3.0 * values[2 * e + 2]) / h;
    out[2 * e + 1] = mid;
    out[2 * e] += e == 0 ? left : 0.5 * left;
    out[2 * e + 2] += e + 1 == ne ? right : 0.5 * right;
  }
  return out;
}

std::vector<double> nodal_dxx(std::span<const double> values, const Mesh& mesh) {
  check_size(values, mesh);
  const std::size_t ne = mesh.element_count();
  const auto h = mesh.h();
  std::vector<double> out(mesh.node_count(), 0.0);

  if (mesh.order() == ElementOrder::P1) {
    for (std::size_t i = 1; i < ne; ++i) {
      const double sp = (values[i + 1] - values[i]) / h[i];
      const double sm = (values[i] - values[i - 1]) / h[i - 1];
      out[i] = 2.0 * (sp - sm) / (h[i - 1] + h[i]);
    }
    out.front() = out[1];
    out.back() = out[ne - 1];
    return out;
  }

  for (std::size_t e = 0; e < ne; ++e) {
    const double c = 4.0 * (values[2 * e] - 2.0 * values[2 * e + 1] + values[2 * e + 2]) / (h[e] * h[e]);
    out[2 * e + 1] = c;
    out[2 * e] += e == 0 ? c : 0.5 * c;
    out[2 * e + 2] += e + 1 == ne ? c : 0.5 * c;
  }
  return out;
}

std::vector<double> compute_delta(std::span<const double> values, const Mesh& mesh) {
  std::vector<double> vx = nodal_dx(values, mesh);
  const auto s = mesh.nodes_s();
  for (std::size_t i = 0; i < vx.size(); ++i) vx[i] /= s[i];
  return vx;
}

std::vector<double> compute_gamma(std::span<const double> values, const Mesh& mesh) {
  const std::vector<double> vx = nodal_dx(values, mesh);
  std::vector<double> vxx = nodal_dxx(values, mesh);
  const auto s = mesh.nodes_s();
  for (std::size_t i = 0; i < vxx.size(); ++i) vxx[i] = (vxx[i] - vx[i]) / (s[i] * s[i]);
  return vxx;
}

std::vector<double> compute_theta(const SolutionGrid& solution, std::size_t level) {
  if (level == 0) throw InvalidInputError("compute_theta: level must be >= 1");
  if (level >= solution.levels()) throw InvalidInputError("compute_theta: level out of range");
  const auto now = solution.at_level(level);
  const auto before = solution.at_level(level - 1);
  const double dt = solution.time.schedule.at(level - 1).dt;
  std::vector<double> out(now.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -(now[i] - before[i]) / dt;
  return out;
}

GreeksGrid compute_greeks(const SolutionGrid& solution, std::size_t level) {
  const auto values = solution.at_level(level);
  const auto s = solution.mesh.nodes_s();
  return {std::vector<double>(s.begin(), s.end()), compute_delta(values, solution.mesh),
          compute_gamma(values, solution.mesh),
          level == 0 ? std::vector<double>(values.size(), 0.0) : compute_theta(solution, level)};
}

GreeksGrid compute_greeks(const SolutionGrid& solution) { return compute_greeks(solution, solution.levels() - 1); }

PointGreeks greeks_at(const SolutionGrid& solution, double s) {
  const Mesh& mesh = solution.mesh;
  const double x = to_log(s, mesh.strike());
  const auto today = solution.today();
  const std::vector<double> theta = compute_theta(solution, solution.levels() - 1);

  const InterpolantSample sample = evaluate_interpolant(mesh, today, x);
  const std::vector<double> vx = nodal_dx(today, mesh);
  const std::vector<double> vxx = nodal_dxx(today, mesh);
  const double dx = linear_interp(mesh, vx, x);
  const double dxx = linear_interp(mesh, vxx, x);
  return {sample.value, dx / s, (dxx - dx) / (s * s), linear_interp(mesh, theta, x)};
}

}  // namespace hjbfem
