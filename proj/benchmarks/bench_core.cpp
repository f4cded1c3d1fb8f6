#include <benchmark/benchmark.h>

#include <vector>

#include <Eigen/Dense>

#include "optocool/expm.hpp"
#include "optocool/moments.hpp"
#include "optocool/oracle.hpp"
#include "optocool/params.hpp"
#include "optocool/sweep.hpp"

namespace {

optocool::SystemParams fig1(double g) {
  optocool::SystemParams p = optocool::preset("paper_fig1").params;
  p.G = g;
  return p;
}

void BM_Expm(benchmark::State& state) {
  const auto mm = optocool::build_matrices(fig1(0.3));
  const Eigen::MatrixXcd a = mm.m * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optocool::expm(a));
}
BENCHMARK(BM_Expm)->Arg(1)->Arg(40)->Arg(1000);

void BM_Propagate(benchmark::State& state) {
  const optocool::SystemParams p = fig1(0.1);
  const auto mm = optocool::build_matrices(p);
  const auto v0 = optocool::initial_vector(p.n_th);
  const auto times = optocool::linspace(0.0, 200.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(optocool::propagate(mm, v0, times));
}
BENCHMARK(BM_Propagate)->Arg(201)->Arg(2001);

// One coupling column of the 200 x 800 zero-temperature grid.
void BM_SweepColumn(benchmark::State& state) {
  const optocool::SystemParams p = fig1(0.0);
  const std::vector<double> g{0.3};
  const auto t = optocool::linspace(0.0, 40.0, 800);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optocool::sweep_time_g(p, g, t, optocool::Mode::kZeroTemp));
  }
}
BENCHMARK(BM_SweepColumn);

void BM_ExtractNIns(benchmark::State& state) {
  const optocool::SystemParams p = fig1(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optocool::extract_n_ins(p, optocool::Mode::kZeroTemp));
  }
}
BENCHMARK(BM_ExtractNIns)->Unit(benchmark::kMillisecond);

// Short fixed horizon; cost per RK4 step is time / (t / max_step).
void BM_OracleEvolve(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  optocool::SystemParams p = fig1(0.2);
  p.n_th = 0.1;
  const std::vector<double> times{0.0, 0.5};
  optocool::OracleOptions opt;
  opt.throw_on_leak = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optocool::evolve_master(p, {dim, dim, 1e-6, 400}, times, opt));
  }
}
BENCHMARK(BM_OracleEvolve)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
