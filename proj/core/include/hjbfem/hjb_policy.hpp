#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hjbfem/fem_assembly.hpp"
#include "hjbfem/market_model.hpp"

namespace hjbfem {

/// Discrete control term operators.
///
///   Long:  op1 = (r_l - r_b)(N - M),  op2 = -(r_b - r_l + r_f) N   (min)
///   Short: op1 = (r_b - r_l)(N - M),  op2 = -r_f N                 (max)
struct ControlOperators {
  GlobalOperator op1;
  GlobalOperator op2;
  Position position;
};

ControlOperators build_control_operators(const SpatialOperators& ops, const MarketParams& params, Position position);

enum class PolicyChoice : std::uint8_t { Zero, Op1, Op2 };

using PolicyVector = std::vector<PolicyChoice>;

/// Case split of the control term for one node, with a1 = (op1 v)_j and
/// a2 = (op2 v)_j. Ties go to Zero first, then to the written order:
///   Short: Zero if a1 <= 0 and a2 <= 0; Op1 if a1 > 0 and a1 > a2; else Op2.
///   Long:  Zero if a1 >= 0 and a2 >= 0; Op1 if a1 < 0 and a1 < a2; else Op2.
PolicyChoice choose_control(Position position, double a1, double a2);

/// Node-wise optimal control for the value vector v (interior) with Dirichlet data g.
PolicyVector select_policy(const ControlOperators& ops, std::span<const double> v, BoundaryValues g);

struct PolicyMatrix {
  GlobalOperator matrix;  // row j = row j of the operator selected at node j
  PolicyVector policy;
};

PolicyMatrix build_policy_matrix(const ControlOperators& ops, const PolicyVector& policy);

}  // namespace hjbfem
