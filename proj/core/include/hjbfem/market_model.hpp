#pragma once

#include <string_view>

namespace hjbfem {

/// Contract and market-friction parameters of the straddle.
///
/// Rates are continuously compounded per year; `s_min`/`s_max` truncate the
/// asset axis (the log transform needs `s_min > 0`).
struct MarketParams {
  double sigma = 0.3;
  double r_b = 0.05;   // borrowing rate
  double r_l = 0.03;   // lending rate
  double r_f = 0.004;  // stock-borrow fee
  double strike = 100.0;
  double maturity = 1.0;
  double s_min = 1000.0 / 91.0;  // default_s_min(100, 1000)
  double s_max = 1000.0;

  /// Throws InvalidInputError when any invariant is violated.
  void validate() const;

  /// Lower truncation that makes S = K a vertex of the uniform-S mesh for
  /// every element count divisible by 100: K sits at the largest grid
  /// fraction j/100 strictly below K/S_max. Falls back to K/100 when that
  /// would put S_min above K/2.
  static double default_s_min(double strike, double s_max);
};

enum class Position { Long, Short };

std::string_view to_string(Position p);
Position parse_position(std::string_view s);

double straddle_payoff(double s, double strike);

/// x = ln(S/K)
double to_log(double s, double strike);
/// S = K e^x
double from_log(double x, double strike);

struct BoundaryValues {
  double left;
  double right;
};

/// Time-independent Dirichlet data K - K e^{x_min} and K e^{x_max} - K.
BoundaryValues boundary_values(const MarketParams& params, double tau);

/// Closed-form Black-Scholes straddle (call + put) with a single rate `r`.
/// `tau` is time to expiry; when omitted the full maturity is used.
double bs_call_price(double s, double strike, double r, double sigma, double tau);
double bs_put_price(double s, double strike, double r, double sigma, double tau);
double bs_straddle_price(double s, const MarketParams& params, double r);

struct BsGreeks {
  double delta;
  double gamma;
  double theta;  // dV/dt in calendar time
};

/// Closed-form straddle Greeks, used as an oracle for the linear reduction.
BsGreeks bs_straddle_greeks(double s, double strike, double r, double sigma, double tau);

/// True when both control terms vanish identically (r_b == r_l, r_f == 0).
bool is_linear_reduction(const MarketParams& params);

}  // namespace hjbfem
