// hjbfem: straddle pricing under stock borrowing fees.
//
//   hjbfem price    --position long --method p2 --ne 100 --nt 27
//   hjbfem converge --position short --method p1 [--levels 100:27,200:52,...]
//   hjbfem surface  --method p2 --stride 10 [--with-greeks]
//   hjbfem greeks   --method fdm --ne 400 --nt 102
//
// Every flag may also come from a flat key=value file given with --config;
// command-line flags win.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hjbfem/errors.hpp"
#include "hjbfem/fdm.hpp"
#include "hjbfem/greeks.hpp"
#include "hjbfem/report.hpp"
#include "hjbfem/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string position = "long";
  std::string method = "p2";
  int ne = 100;
  int nt = 27;
  std::string levels;
  double tol = 1e-7;
  double scale = 1.0;
  int max_iter = 50;
  int rannacher = 2;
  double theta = 0.5;
  std::optional<double> smin;
  double smax = 1000.0;
  double strike = 100.0;
  double sigma = 0.3;
  double rb = 0.05;
  double rl = 0.03;
  double rf = 0.004;
  double maturity = 1.0;
  std::string format = "csv";
  std::string out = "-";
  bool linear_reduction = false;
  std::string fdm_spacing = "uniform-s";
  int stride = 1;
  bool with_greeks = false;
  bool no_fdm_timing = false;
};

hjbfem::MarketParams market(const Options& o) {
  hjbfem::MarketParams p;
  p.sigma = o.sigma;
  p.r_b = o.rb;
  p.r_l = o.linear_reduction ? o.rb : o.rl;
  p.r_f = o.linear_reduction ? 0.0 : o.rf;
  p.strike = o.strike;
  p.maturity = o.maturity;
  p.s_max = o.smax;
  p.s_min = o.smin ? *o.smin : hjbfem::MarketParams::default_s_min(o.strike, o.smax);
  p.validate();
  return p;
}

hjbfem::PricerConfig pricer(const Options& o) {
  hjbfem::PricerConfig c;
  c.solver.tol = o.tol;
  c.solver.scale = o.scale;
  c.solver.max_iter = o.max_iter;
  c.solver.validate();
  c.rannacher_steps = o.rannacher;
  c.theta = o.theta;
  return c;
}

hjbfem::SolutionGrid solve(const Options& o) {
  const auto params = market(o);
  const auto position = hjbfem::parse_position(o.position);
  const auto method = hjbfem::parse_method(o.method);
  if (o.ne < 2) throw hjbfem::InvalidInputError("--ne must be >= 2");
  if (o.nt < 1) throw hjbfem::InvalidInputError("--nt must be >= 1");
  if (method == hjbfem::Method::Fdm) {
    const auto spacing = o.fdm_spacing == "uniform-x" ? hjbfem::FdmSpacing::UniformX : hjbfem::FdmSpacing::UniformS;
    return hjbfem::run_fdm(params, position, o.ne, o.nt, pricer(o), spacing);
  }
  return hjbfem::run_pricer(params, position, method, o.ne, o.nt, pricer(o));
}

/// Opens --out ("-" is stdout). Throws std::ios_base::failure on error.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::ios_base::failure("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw std::ios_base::failure("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int cmd_price(const Options& o) {
  const auto format = hjbfem::parse_format(o.format);
  Output out(o.out);
  try {
    const auto solution = solve(o);
    hjbfem::write_price(hjbfem::make_price_report(solution, o.linear_reduction), format, out.stream());
  } catch (const hjbfem::NonConvergenceError& e) {
    // Partial output: flag the failure in the report's own format.
    if (format == hjbfem::OutputFormat::Json) {
      out.stream() << "{\n  \"converged\": false,\n  \"error\": \"" << e.what() << "\"\n}\n";
    } else {
      out.stream() << "converged,error\n0,\"" << e.what() << "\"\n";
    }
    out.close();
    throw;
  }
  out.close();
  return kExitOk;
}

int cmd_converge(const Options& o) {
  const auto format = hjbfem::parse_format(o.format);
  const auto levels = o.levels.empty() ? hjbfem::default_levels() : hjbfem::parse_levels(o.levels);
  const auto report = hjbfem::run_convergence(market(o), hjbfem::parse_position(o.position),
                                              hjbfem::parse_method(o.method), levels, pricer(o), !o.no_fdm_timing);
  Output out(o.out);
  hjbfem::write_convergence(report, format, out.stream());
  out.close();
  for (const auto& row : report.rows) {
    if (row.failed) return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_surface(const Options& o) {
  const auto format = hjbfem::parse_format(o.format);
  const auto solution = solve(o);
  Output out(o.out);
  hjbfem::write_surface(solution, o.stride, o.with_greeks, format, out.stream());
  out.close();
  return kExitOk;
}

int cmd_greeks(const Options& o) {
  const auto format = hjbfem::parse_format(o.format);
  const auto solution = solve(o);
  Output out(o.out);
  hjbfem::write_greeks(hjbfem::compute_greeks(solution), format, out.stream());
  out.close();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Straddle pricing with stock borrowing fees (HJB, FEM/FDM, Crank-Nicolson-Rannacher)"};
  app.set_config("--config", "", "Flat key=value file; keys are the long flag names");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--position", o.position, "long|short")->capture_default_str();
  app.add_option("--method", o.method, "fdm|p1|p2")->capture_default_str();
  app.add_option("--ne", o.ne, "Element count (FDM: intervals)")->capture_default_str();
  app.add_option("--nt", o.nt, "Time steps")->capture_default_str();
  app.add_option("--levels", o.levels, "Convergence levels nE:Nt,... (default: 100:27 up to 3200:802)");
  app.add_option("--tol", o.tol, "Policy iteration tolerance")->capture_default_str();
  app.add_option("--scale", o.scale, "Stopping-criterion denominator floor")->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Policy iterations per time step")->capture_default_str();
  app.add_option("--rannacher", o.rannacher, "Fully implicit start-up steps")->capture_default_str();
  app.add_option("--theta", o.theta, "Theta after the start-up steps")->capture_default_str();
  app.add_option("--smin", o.smin, "Lower S truncation (default puts K on the grid)");
  app.add_option("--smax", o.smax, "Upper S truncation")->capture_default_str();
  app.add_option("--strike", o.strike, "Strike K")->capture_default_str();
  app.add_option("--sigma", o.sigma, "Volatility")->capture_default_str();
  app.add_option("--rb", o.rb, "Borrowing rate")->capture_default_str();
  app.add_option("--rl", o.rl, "Lending rate")->capture_default_str();
  app.add_option("--rf", o.rf, "Stock borrowing fee")->capture_default_str();
  app.add_option("--maturity", o.maturity, "Maturity T in years")->capture_default_str();
  app.add_option("--format", o.format, "csv|json")->capture_default_str();
  app.add_option("--out", o.out, "Output path, - for stdout")->capture_default_str();
  app.add_flag("--linear-reduction", o.linear_reduction, "Set r_l = r_b, r_f = 0 and report the closed form");
  app.add_option("--fdm-spacing", o.fdm_spacing, "uniform-s|uniform-x")
      ->check(CLI::IsMember({"uniform-s", "uniform-x"}))
      ->capture_default_str();

  auto* price = app.add_subcommand("price", "Single run: value at S=K, nodal slice at t=0, iteration stats");
  auto* converge = app.add_subcommand("converge", "Convergence study (value, change, ratio, iterations, timing)");
  converge->add_flag("--no-fdm-timing", o.no_fdm_timing, "Skip the FDM reference timing runs");
  auto* surface = app.add_subcommand("surface", "(S, t, V) dump every --stride time levels");
  surface->add_option("--stride", o.stride, "Time-level stride")->capture_default_str();
  surface->add_flag("--with-greeks", o.with_greeks, "Add delta, gamma, theta columns");
  auto* greeks = app.add_subcommand("greeks", "Delta, gamma, theta at t=0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*price) return cmd_price(o);
    if (*converge) return cmd_converge(o);
    if (*surface) return cmd_surface(o);
    if (*greeks) return cmd_greeks(o);
  } catch (const hjbfem::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hjbfem::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
