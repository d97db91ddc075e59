#include "hjbfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hjbfem/errors.hpp"

namespace hjbfem {

std::string_view to_string(ElementOrder order) { return order == ElementOrder::P1 ? "p1" : "p2"; }

Mesh::Mesh(ElementOrder order, std::vector<double> element_bounds, double strike)
    : order_(order), element_bounds_(std::move(element_bounds)), strike_(strike) {
  if (element_bounds_.size() < 3) throw InvalidInputError("Mesh: need at least 2 elements");
  if (!(strike_ > 0.0)) throw InvalidInputError("Mesh: strike must be positive");

  const std::size_t ne = element_bounds_.size() - 1;
  h_.resize(ne);
  for (std::size_t j = 0; j < ne; ++j) {
    h_[j] = element_bounds_[j + 1] - element_bounds_[j];
    if (!(h_[j] > 0.0)) throw InvalidInputError("Mesh: element bounds must be strictly increasing");
  }

  if (order_ == ElementOrder::P1) {
    nodes_x_ = element_bounds_;
  } else {
    nodes_x_.reserve(2 * ne + 1);
    for (std::size_t j = 0; j < ne; ++j) {
      nodes_x_.push_back(element_bounds_[j]);
      nodes_x_.push_back(0.5 * (element_bounds_[j] + element_bounds_[j + 1]));
    }
    nodes_x_.push_back(element_bounds_.back());
  }

  nodes_s_.resize(nodes_x_.size());
  std::transform(nodes_x_.begin(), nodes_x_.end(), nodes_s_.begin(),
                 [this](double x) { return from_log(x, strike_); });
}

std::size_t Mesh::locate(double x) const {
  if (x < x_min() || x > x_max()) throw InvalidInputError("Mesh::locate: point outside the domain");
  auto it = std::lower_bound(element_bounds_.begin() + 1, element_bounds_.end(), x);
  if (it == element_bounds_.end()) --it;
  return static_cast<std::size_t>(it - element_bounds_.begin()) - 1;
}

std::size_t Mesh::find_node(double x, double tol) const {
  auto it = std::lower_bound(nodes_x_.begin(), nodes_x_.end(), x - tol);
  if (it != nodes_x_.end() && std::abs(*it - x) <= tol) {
    return static_cast<std::size_t>(it - nodes_x_.begin());
  }
  return nodes_x_.size();
}

Mesh build_mesh(const MarketParams& params, int element_count, ElementOrder order) {
  if (element_count < 2) throw InvalidInputError("build_mesh: nE must be >= 2");
  params.validate();

  const auto ne = static_cast<std::size_t>(element_count);
  const double ds = (params.s_max - params.s_min) / static_cast<double>(ne);
  std::vector<double> bounds(ne + 1);
  for (std::size_t j = 0; j <= ne; ++j) {
    bounds[j] = to_log(params.s_min + static_cast<double>(j) * ds, params.strike);
  }
  // Pin the endpoints so they match the truncation exactly.
  bounds.front() = to_log(params.s_min, params.strike);
  bounds.back() = to_log(params.s_max, params.strike);
  return Mesh(order, std::move(bounds), params.strike);
}

InterpolantSample evaluate_interpolant(const Mesh& mesh, std::span<const double> values, double x) {
  if (values.size() != mesh.node_count()) {
    throw InvalidInputError("evaluate_interpolant: value count does not match the mesh");
  }
  const std::size_t e = mesh.locate(x);
  const double x0 = mesh.element_bounds()[e];
  const double h = mesh.h()[e];

  if (mesh.order() == ElementOrder::P1) {
    const double v0 = values[e];
    const double v1 = values[e + 1];
    const double t = (x - x0) / h;
    return {v0 + t * (v1 - v0), (v1 - v0) / h, 0.0};
  }

  const double v0 = values[2 * e];
  const double vm = values[2 * e + 1];
  const double v1 = values[2 * e + 2];
  const double t = (x - x0) / h;  // local coordinate in [0, 1]
  // Lagrange basis on {0, 1/2, 1}.
  const double l0 = (2.0 * t - 1.0) * (t - 1.0);
  const double lm = 4.0 * t * (1.0 - t);
  const double l1 = t * (2.0 * t - 1.0);
  const double d0 = 4.0 * t - 3.0;
  const double dm = 4.0 - 8.0 * t;
  const double d1 = 4.0 * t - 1.0;
  return {v0 * l0 + vm * lm + v1 * l1,
          (v0 * d0 + vm * dm + v1 * d1) / h,
          (4.0 * v0 - 8.0 * vm + 4.0 * v1) / (h * h)};
}

StrikeValue strike_node_value(std::span<const double> values, const Mesh& mesh, double s_query) {
  const double s_lo = mesh.nodes_s().front();
  const double s_hi = mesh.nodes_s().back();
  const double rel = 1e-12 * s_hi;
  if (s_query < s_lo - rel || s_query > s_hi + rel) {
    throw InvalidInputError("strike_node_value: query outside [S_min, S_max]");
  }
  const double x = std::clamp(to_log(s_query, mesh.strike()), mesh.x_min(), mesh.x_max());
  const std::size_t node = mesh.find_node(x);
  if (node < mesh.node_count()) return {values[node], true};
  return {evaluate_interpolant(mesh, values, x).value, false};
}

}  // namespace hjbfem
