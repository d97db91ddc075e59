#include "hjbfem/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hjbfem/errors.hpp"

namespace hjbfem {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

void MarketParams::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidInputError("MarketParams: " + msg); };
  if (!(sigma > 0.0)) fail("sigma must be positive");
  if (!(maturity > 0.0)) fail("maturity must be positive");
  if (!(strike > 0.0)) fail("strike must be positive");
  if (!(s_min > 0.0 && s_min < strike && strike < s_max)) fail("require 0 < S_min < K < S_max");
  if (!(r_b >= r_l && r_l >= 0.0)) fail("require r_b >= r_l >= 0");
  if (!(r_f >= 0.0)) fail("r_f must be non-negative");
}

double MarketParams::default_s_min(double strike, double s_max) {
  const double fallback = strike / 100.0;
  if (!(strike > 0.0) || !(s_max > strike)) return fallback;
  const double fraction = (std::ceil(100.0 * strike / s_max - 1e-12) - 1.0) / 100.0;
  if (fraction <= 0.0) return fallback;
  const double s_min = (strike - fraction * s_max) / (1.0 - fraction);
  return s_min > 0.0 && s_min <= 0.5 * strike ? s_min : fallback;
}

std::string_view to_string(Position p) { return p == Position::Long ? "long" : "short"; }

Position parse_position(std::string_view s) {
  if (s == "long") return Position::Long;
  if (s == "short") return Position::Short;
  throw InvalidInputError("unknown position '" + std::string(s) + "' (expected long|short)");
}

double straddle_payoff(double s, double strike) {
  if (s < 0.0 || !(strike > 0.0)) throw InvalidInputError("straddle_payoff: need S >= 0 and K > 0");
  return std::abs(s - strike);
}

double to_log(double s, double strike) {
  if (!(s > 0.0) || !(strike > 0.0)) throw InvalidInputError("to_log: need S > 0 and K > 0");
  return std::log(s / strike);
}

double from_log(double x, double strike) { return strike * std::exp(x); }

BoundaryValues boundary_values(const MarketParams& params, double tau) {
  if (tau < 0.0 || tau > params.maturity) {
    throw InvalidInputError("boundary_values: tau outside [0, T]");
  }
  // K - K e^{x_min} = K - S_min, K e^{x_max} - K = S_max - K.
  return {params.strike - params.s_min, params.s_max - params.strike};
}

double bs_call_price(double s, double strike, double r, double sigma, double tau) {
  const double df = std::exp(-r * tau);
  const double vol = sigma * std::sqrt(tau);
  if (vol <= 1e-14) return std::max(s - strike * df, 0.0);
  const double d1 = (std::log(s / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  return s * norm_cdf(d1) - strike * df * norm_cdf(d2);
}

double bs_put_price(double s, double strike, double r, double sigma, double tau) {
  const double df = std::exp(-r * tau);
  const double vol = sigma * std::sqrt(tau);
  if (vol <= 1e-14) return std::max(strike * df - s, 0.0);
  const double d1 = (std::log(s / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  return strike * df * norm_cdf(-d2) - s * norm_cdf(-d1);
}

double bs_straddle_price(double s, const MarketParams& params, double r) {
  return bs_call_price(s, params.strike, r, params.sigma, params.maturity) +
         bs_put_price(s, params.strike, r, params.sigma, params.maturity);
}

BsGreeks bs_straddle_greeks(double s, double strike, double r, double sigma, double tau) {
  const double vol = sigma * std::sqrt(tau);
  const double d1 = (std::log(s / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  const double df = std::exp(-r * tau);
  // call + put: delta_c + delta_p = 2N(d1) - 1, gammas add, thetas add.
  const double delta = 2.0 * norm_cdf(d1) - 1.0;
  const double gamma = 2.0 * norm_pdf(d1) / (s * vol);
  const double theta_call = -s * norm_pdf(d1) * sigma / (2.0 * std::sqrt(tau)) - r * strike * df * norm_cdf(d2);
  const double theta_put = -s * norm_pdf(d1) * sigma / (2.0 * std::sqrt(tau)) + r * strike * df * norm_cdf(-d2);
  return {delta, gamma, theta_call + theta_put};
}

bool is_linear_reduction(const MarketParams& params) {
  return params.r_b == params.r_l && params.r_f == 0.0;
}

}  // namespace hjbfem
