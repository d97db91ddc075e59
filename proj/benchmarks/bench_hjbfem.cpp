#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hjbfem/banded_matrix.hpp"
#include "hjbfem/fem_assembly.hpp"
#include "hjbfem/mesh.hpp"
#include "hjbfem/solver.hpp"

namespace {

void BM_AssembleP2(benchmark::State& state) {
  const hjbfem::MarketParams params;
  const auto mesh = hjbfem::build_mesh(params, static_cast<int>(state.range(0)), hjbfem::ElementOrder::P2);
  for (auto _ : state) benchmark::DoNotOptimize(hjbfem::assemble_operators(mesh));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleP2)->RangeMultiplier(4)->Range(100, 6400)->Complexity(benchmark::oN);

void BM_SolveBanded(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto b = static_cast<std::size_t>(state.range(1));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  hjbfem::BandedMatrix a(n, b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i > b ? i - b : 0; j <= std::min(n - 1, i + b); ++j) a.at(i, j) = u(rng);
    a.at(i, i) += 2.0 * static_cast<double>(b) + 1.0;
  }
  std::vector<double> rhs(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hjbfem::solve_banded(a, rhs));
}
BENCHMARK(BM_SolveBanded)->ArgsProduct({{1000, 10000}, {1, 2}});

// Wall time per method at matched (n, N_t): the relative-execution column.
void BM_Pricer(benchmark::State& state) {
  const hjbfem::MarketParams params;
  const auto method = static_cast<hjbfem::Method>(state.range(0));
  const int ne = static_cast<int>(state.range(1));
  const int nt = static_cast<int>(state.range(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hjbfem::run_pricer(params, hjbfem::Position::Long, method, ne, nt).today().data());
  }
}
BENCHMARK(BM_Pricer)
    ->ArgsProduct({{static_cast<long>(hjbfem::Method::Fdm), static_cast<long>(hjbfem::Method::P1),
                    static_cast<long>(hjbfem::Method::P2)},
                   {100},
                   {27}})
    ->Args({static_cast<long>(hjbfem::Method::Fdm), 800, 202})
    ->Args({static_cast<long>(hjbfem::Method::P2), 200, 52})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
