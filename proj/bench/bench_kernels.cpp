#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sgcauc/kernels.hpp"
#include "sgcauc/scenario.hpp"

using namespace sgcauc;
using namespace sgcauc::kernels;

namespace {

struct Data {
  std::vector<std::uint8_t> y;
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> pw;
};

Data make_data(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> wd(0.5, 3.0);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = z(rng);
    d.y.push_back(u > 0.84 ? 1 : 0);
    d.x.push_back(0.6 * u + 0.8 * z(rng));
    d.w.push_back(wd(rng));
  }
  d.pw.assign(n * n, 1.0);
  return d;
}

template <PairSums (*Fn)(const PairInput&, PairWeightScheme)>
void kendall(benchmark::State& state) {
  const Data d = make_data(static_cast<std::size_t>(state.range(0)));
  const PairInput in{d.y, d.x, d.w, d.pw};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in, PairWeightScheme::TruePairwise));
  state.SetComplexityN(state.range(0));
}

template <PairSums (*Fn)(const PairInput&, PairWeightScheme)>
void case_control(benchmark::State& state) {
  const Data d = make_data(static_cast<std::size_t>(state.range(0)));
  const PairInput in{d.y, d.x, d.w, {}};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in, PairWeightScheme::ProductOfSingles));
}

void kendall_count(benchmark::State& state) {
  const Data d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kendall_unweighted_count(d.y, d.x));
}

ScenarioConfig bench_config() {
  ScenarioConfig c;
  c.scenarios = {{1, 1}};
  c.r_grid = {0.3, 0.6};
  c.replications = 4;
  return c;
}

void grid_serial(benchmark::State& state) {
  const ScenarioConfig c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_grid_serial(c));
}

void grid_parallel(benchmark::State& state) {
  const ScenarioConfig c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_grid(c));
}

}  // namespace

BENCHMARK(kendall<kendall_pairs_serial>)->Name("kendall_pairs/serial")->Arg(600)->Arg(2400);
BENCHMARK(kendall<kendall_pairs_parallel>)->Name("kendall_pairs/parallel")->Arg(600)->Arg(2400);
BENCHMARK(case_control<case_control_auc_serial>)->Name("case_control_auc/serial")->Arg(600)->Arg(2400);
BENCHMARK(case_control<case_control_auc_parallel>)->Name("case_control_auc/parallel")->Arg(600)->Arg(2400);
BENCHMARK(kendall_count)->Arg(600)->Arg(100000);
BENCHMARK(grid_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
