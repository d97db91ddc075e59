#include "hjbfem/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hjbfem/errors.hpp"
#include "hjbfem/fdm.hpp"

namespace hjbfem {

namespace {

using nlohmann::json;

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(kDigits) << v;
  return os.str();
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string{}; }

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::size_t> surface_levels(const SolutionGrid& solution, int stride) {
  if (stride < 1) throw InvalidInputError("write_surface: stride must be >= 1");
  const std::size_t last = solution.levels() - 1;
  std::vector<std::size_t> levels;
  for (std::size_t m = 0; m < last; m += static_cast<std::size_t>(stride)) levels.push_back(m);
  levels.push_back(last);
  return levels;
}

}  // namespace

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InvalidInputError("unknown format '" + std::string(s) + "' (expected csv|json)");
}

std::vector<Level> default_levels() {
  return {{100, 27}, {200, 52}, {400, 102}, {800, 202}, {1600, 402}, {3200, 802}};
}

std::vector<Level> parse_levels(std::string_view text) {
  std::vector<Level> out;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw InvalidInputError("levels: expected nE:Nt, got '" + std::string(item) + "'");
    Level level{};
    const auto a = std::from_chars(item.data(), item.data() + colon, level.elements);
    const auto b = std::from_chars(item.data() + colon + 1, item.data() + item.size(), level.steps);
    if (a.ec != std::errc{} || b.ec != std::errc{} || a.ptr != item.data() + colon ||
        b.ptr != item.data() + item.size()) {
      throw InvalidInputError("levels: malformed entry '" + std::string(item) + "'");
    }
    if (level.elements < 2 || level.steps < 1) {
      throw InvalidInputError("levels: need nE >= 2 and Nt >= 1 in '" + std::string(item) + "'");
    }
    out.push_back(level);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw InvalidInputError("levels: empty list");
  return out;
}

void compute_changes(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].change.reset();
    rows[k].ratio.reset();
    if (k == 0 || rows[k].failed || rows[k - 1].failed) continue;
    rows[k].change = std::abs(rows[k].value - rows[k - 1].value);
    const auto& prev = rows[k - 1].change;
    if (prev && *rows[k].change != 0.0) rows[k].ratio = *prev / *rows[k].change;
  }
}

ConvergenceReport run_convergence(const MarketParams& params, Position position, Method method,
                                  const std::vector<Level>& levels, const PricerConfig& config,
                                  bool time_against_fdm) {
  if (levels.size() < 2) throw InvalidInputError("run_convergence: need at least two levels");
  ConvergenceReport report{position, method, {}};
  for (const Level& level : levels) {
    ConvergenceRow row;
    row.elements = level.elements;
    row.steps = level.steps;
    try {
      const SolutionGrid sol = run_pricer(params, position, method, level.elements, level.steps, config);
      const StrikeValue at_k = strike_node_value(sol.today(), sol.mesh, params.strike);
      row.value = at_k.value;
      row.strike_on_node = at_k.on_node;
      row.total_iterations = sol.total_iterations;
      row.avg_iterations = sol.average_iterations();
      row.wall_time = sol.wall_time;
      if (time_against_fdm && method != Method::Fdm) {
        const SolutionGrid fdm = run_fdm(params, position, level.elements, level.steps, config);
        if (fdm.wall_time > 0.0) row.relative_time = sol.wall_time / fdm.wall_time;
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  compute_changes(report.rows);
  return report;
}

void write_convergence(const ConvergenceReport& report, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    json rows = json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"nE", r.elements},
                      {"Nt", r.steps},
                      {"value", r.failed ? json(nullptr) : json(r.value)},
                      {"change", opt(r.change)},
                      {"ratio", opt(r.ratio)},
                      {"total_iterations", r.total_iterations},
                      {"avg_iterations", r.avg_iterations},
                      {"wall_time", r.wall_time},
                      {"relative_time", opt(r.relative_time)},
                      {"strike_on_node", r.strike_on_node},
                      {"failed", r.failed},
                      {"error", r.error}});
    }
    json doc = {{"position", to_string(report.position)}, {"method", to_string(report.method)}, {"rows", rows}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "nE,Nt,value,change,ratio,total_iterations,avg_iterations,wall_time,relative_time,strike_on_node,failed,error\n";
  for (const auto& r : report.rows) {
    out << r.elements << ',' << r.steps << ',' << (r.failed ? std::string{} : num(r.value)) << ',' << num(r.change)
        << ',' << num(r.ratio) << ',' << r.total_iterations << ',' << num(r.avg_iterations) << ','
        << num(r.wall_time) << ',' << num(r.relative_time) << ',' << (r.strike_on_node ? 1 : 0) << ','
        << (r.failed ? 1 : 0) << ',' << '"' << r.error << '"' << '\n';
  }
}

PriceReport make_price_report(const SolutionGrid& solution, bool with_closed_form) {
  const MarketParams& p = solution.params;
  const StrikeValue at_k = strike_node_value(solution.today(), solution.mesh, p.strike);
  PriceReport r{solution.position,
                solution.method,
                static_cast<int>(solution.mesh.element_count()),
                solution.time.steps,
                at_k.value,
                at_k.on_node,
                solution.total_iterations,
                solution.average_iterations(),
                solution.wall_time,
                solution.converged,
                std::nullopt,
                {solution.mesh.nodes_s().begin(), solution.mesh.nodes_s().end()},
                {solution.today().begin(), solution.today().end()}};
  if (with_closed_form) r.closed_form = bs_straddle_price(p.strike, p, p.r_b);
  return r;
}

void write_price(const PriceReport& r, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    json nodes = json::array();
    for (std::size_t i = 0; i < r.nodes_s.size(); ++i) nodes.push_back({{"S", r.nodes_s[i]}, {"V", r.values[i]}});
    json doc = {{"position", to_string(r.position)},
                {"method", to_string(r.method)},
                {"nE", r.elements},
                {"Nt", r.steps},
                {"value_at_strike", r.value_at_strike},
                {"strike_on_node", r.strike_on_node},
                {"total_iterations", r.total_iterations},
                {"avg_iterations", r.avg_iterations},
                {"wall_time", r.wall_time},
                {"converged", r.converged},
                {"closed_form", opt(r.closed_form)},
                {"nodes", nodes}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "position,method,nE,Nt,value_at_strike,strike_on_node,total_iterations,avg_iterations,wall_time,converged,"
         "closed_form\n";
  out << to_string(r.position) << ',' << to_string(r.method) << ',' << r.elements << ',' << r.steps << ','
      << num(r.value_at_strike) << ',' << (r.strike_on_node ? 1 : 0) << ',' << r.total_iterations << ','
      << num(r.avg_iterations) << ',' << num(r.wall_time) << ',' << (r.converged ? 1 : 0) << ','
      << num(r.closed_form) << "\n\nS,V\n";
  for (std::size_t i = 0; i < r.nodes_s.size(); ++i) out << num(r.nodes_s[i]) << ',' << num(r.values[i]) << '\n';
}

void write_surface(const SolutionGrid& solution, int stride, bool with_greeks, OutputFormat format,
                   std::ostream& out) {
  const double maturity = solution.params.maturity;
  const double dt = solution.time.dt;
  json rows = json::array();
  if (format == OutputFormat::Csv) out << (with_greeks ? "S,t,V,delta,gamma,theta\n" : "S,t,V\n");

  for (std::size_t m : surface_levels(solution, stride)) {
    // Level m is tau = m dt, i.e. calendar time t = T - tau.
    const double t = m + 1 == solution.levels() ? 0.0 : maturity - static_cast<double>(m) * dt;
    const auto values = solution.at_level(m);
    const auto s = solution.mesh.nodes_s();
    std::optional<GreeksGrid> g;
    if (with_greeks) g = compute_greeks(solution, m);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (format == OutputFormat::Csv) {
        out << num(s[i]) << ',' << num(t) << ',' << num(values[i]);
        if (g) out << ',' << num(g->delta[i]) << ',' << num(g->gamma[i]) << ',' << num(g->theta[i]);
        out << '\n';
      } else {
        json row = {{"S", s[i]}, {"t", t}, {"V", values[i]}};
        if (g) {
          row["delta"] = g->delta[i];
          row["gamma"] = g->gamma[i];
          row["theta"] = g->theta[i];
        }
        rows.push_back(std::move(row));
      }
    }
  }
  if (format == OutputFormat::Json) out << json{{"rows", rows}}.dump(2) << '\n';
}

void write_greeks(const GreeksGrid& greeks, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    json rows = json::array();
    for (std::size_t i = 0; i < greeks.s.size(); ++i) {
      rows.push_back({{"S", greeks.s[i]}, {"delta", greeks.delta[i]}, {"gamma", greeks.gamma[i]}, {"theta", greeks.theta[i]}});
    }
    out << json{{"rows", rows}}.dump(2) << '\n';
    return;
  }
  out << "S,delta,gamma,theta\n";
  for (std::size_t i = 0; i < greeks.s.size(); ++i) {
    out << num(greeks.s[i]) << ',' << num(greeks.delta[i]) << ',' << num(greeks.gamma[i]) << ','
        << num(greeks.theta[i]) << '\n';
  }
}

}  // namespace hjbfem
