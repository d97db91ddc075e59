#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hjbfem/greeks.hpp"
#include "hjbfem/market_model.hpp"
#include "hjbfem/solver.hpp"

namespace hjbfem {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view s);

struct Level {
  int elements;
  int steps;
};

/// Standard refinement ladder of (nE, N_t) pairs: 100/27 up to 3200/802.
std::vector<Level> default_levels();

/// Parses "100:27,200:52,...".
std::vector<Level> parse_levels(std::string_view text);

struct ConvergenceRow {
  int elements = 0;
  int steps = 0;
  double value = 0.0;
  std::optional<double> change;  // |value_k - value_{k-1}|
  std::optional<double> ratio;   // change_{k-1} / change_k
  int total_iterations = 0;
  double avg_iterations = 0.0;
  double wall_time = 0.0;
  std::optional<double> relative_time;  // wall_time / FDM wall_time at the same level
  bool strike_on_node = true;
  bool failed = false;
  std::string error;
};

struct ConvergenceReport {
  Position position = Position::Long;
  Method method = Method::P2;
  std::vector<ConvergenceRow> rows;
};

/// Fills change and ratio from the value column. Failed rows break the chain.
void compute_changes(std::vector<ConvergenceRow>& rows);

/// Runs every level (in order); a failing level is marked and the study
/// continues. With `time_against_fdm` set and method != FDM each level is
/// also timed with the FDM benchmark at the same (n, N_t).
ConvergenceReport run_convergence(const MarketParams& params, Position position, Method method,
                                  const std::vector<Level>& levels, const PricerConfig& config,
                                  bool time_against_fdm = true);

void write_convergence(const ConvergenceReport& report, OutputFormat format, std::ostream& out);

/// Summary of a single pricing run.
struct PriceReport {
  Position position;
  Method method;
  int elements;
  int steps;
  double value_at_strike;
  bool strike_on_node;
  int total_iterations;
  double avg_iterations;
  double wall_time;
  bool converged;
  std::optional<double> closed_form;  // Black-Scholes straddle, linear reduction only
  std::vector<double> nodes_s;
  std::vector<double> values;
};

PriceReport make_price_report(const SolutionGrid& solution, bool with_closed_form);

void write_price(const PriceReport& report, OutputFormat format, std::ostream& out);

/// (S, t, V) triples every `stride` time levels (t = 0 and t = T always
/// included), optionally with delta/gamma/theta columns.
void write_surface(const SolutionGrid& solution, int stride, bool with_greeks, OutputFormat format,
                   std::ostream& out);

void write_greeks(const GreeksGrid& greeks, OutputFormat format, std::ostream& out);

}  // namespace hjbfem
