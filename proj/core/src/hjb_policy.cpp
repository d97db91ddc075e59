#include "hjbfem/hjb_policy.hpp"

#include "hjbfem/errors.hpp"

namespace hjbfem {

ControlOperators build_control_operators(const SpatialOperators& ops, const MarketParams& params, Position position) {
  const GlobalOperator n_minus_m = ops.convection - ops.mass;
  if (position == Position::Long) {
    return {(params.r_l - params.r_b) * n_minus_m, -(params.r_b - params.r_l + params.r_f) * ops.convection, position};
  }
  return {(params.r_b - params.r_l) * n_minus_m, -params.r_f * ops.convection, position};
}

PolicyChoice choose_control(Position position, double a1, double a2) {
  if (position == Position::Short) {
    if (a1 <= 0.0 && a2 <= 0.0) return PolicyChoice::Zero;
    if (a1 > 0.0 && a1 > a2) return PolicyChoice::Op1;
    return PolicyChoice::Op2;
  }
  if (a1 >= 0.0 && a2 >= 0.0) return PolicyChoice::Zero;
  if (a1 < 0.0 && a1 < a2) return PolicyChoice::Op1;
  return PolicyChoice::Op2;
}

PolicyVector select_policy(const ControlOperators& ops, std::span<const double> v, BoundaryValues g) {
  const std::size_t n = ops.op1.size();
  if (v.size() != n) throw InvalidInputError("select_policy: value vector size mismatch");
  PolicyVector policy(n);
  for (std::size_t j = 0; j < n; ++j) {
    policy[j] = choose_control(ops.position, ops.op1.apply_row(j, v, g), ops.op2.apply_row(j, v, g));
  }
  return policy;
}

PolicyMatrix build_policy_matrix(const ControlOperators& ops, const PolicyVector& policy) {
  const std::size_t n = ops.op1.size();
  if (policy.size() != n) throw InvalidInputError("build_policy_matrix: policy length mismatch");
  PolicyMatrix out{GlobalOperator::zero(n, ops.op1.interior.bandwidth()), policy};
  for (std::size_t j = 0; j < n; ++j) {
    switch (policy[j]) {
      case PolicyChoice::Zero:
        break;
      case PolicyChoice::Op1:
        out.matrix.copy_row(j, ops.op1);
        break;
      case PolicyChoice::Op2:
        out.matrix.copy_row(j, ops.op2);
        break;
    }
  }
  return out;
}

}  // namespace hjbfem
