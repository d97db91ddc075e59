#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hjbfem/market_model.hpp"

namespace hjbfem {

enum class ElementOrder { P1 = 1, P2 = 2 };

std::string_view to_string(ElementOrder order);

/// Partition of the log-price axis x = ln(S/K).
///
/// Nodes are ordered left to right. For P2 the element midpoints are
/// interleaved with the vertices, so vertex j sits at node 2j and the
/// midpoint of element j (1-based, [x_{j-1}, x_j]) sits at node 2j-1.
class Mesh {
 public:
  /// Builds a mesh from explicit element boundaries (strictly increasing).
  Mesh(ElementOrder order, std::vector<double> element_bounds, double strike);

  ElementOrder order() const noexcept { return order_; }
  int degree() const noexcept { return static_cast<int>(order_); }
  std::size_t element_count() const noexcept { return element_bounds_.size() - 1; }
  std::size_t node_count() const noexcept { return nodes_x_.size(); }
  std::size_t interior_count() const noexcept { return nodes_x_.size() - 2; }
  double strike() const noexcept { return strike_; }

  std::span<const double> element_bounds() const noexcept { return element_bounds_; }
  std::span<const double> nodes_x() const noexcept { return nodes_x_; }
  std::span<const double> nodes_s() const noexcept { return nodes_s_; }
  std::span<const double> h() const noexcept { return h_; }

  double x_min() const noexcept { return element_bounds_.front(); }
  double x_max() const noexcept { return element_bounds_.back(); }

  /// Global node index of local node `local` (0..degree) in element `e` (0-based).
  std::size_t global_node(std::size_t e, std::size_t local) const noexcept {
    return e * static_cast<std::size_t>(degree()) + local;
  }

  /// Element containing x (the left one when x is a shared vertex).
  std::size_t locate(double x) const;

  /// Index of the node at exactly x, or node_count() if x is not a node.
  std::size_t find_node(double x, double tol = 1e-12) const;

 private:
  ElementOrder order_;
  std::vector<double> element_bounds_;
  std::vector<double> nodes_x_;
  std::vector<double> nodes_s_;
  std::vector<double> h_;
  double strike_;
};

/// Element boundaries are the log-images of nE+1 uniformly spaced S-points on
/// [S_min, S_max]; element sizes shrink to the right.
Mesh build_mesh(const MarketParams& params, int element_count, ElementOrder order);

/// Value and x-derivatives of the finite-element interpolant at a point.
struct InterpolantSample {
  double value;
  double dx;
  double dxx;  // identically zero for P1
};

InterpolantSample evaluate_interpolant(const Mesh& mesh, std::span<const double> values, double x);

struct StrikeValue {
  double value;
  bool on_node;  // false when the query had to be interpolated
};

/// Evaluates the interpolant at S = s_query (piecewise polynomial in x).
StrikeValue strike_node_value(std::span<const double> values, const Mesh& mesh, double s_query);

}  // namespace hjbfem
