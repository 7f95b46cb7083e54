// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "plap/grid.hpp"
#include "plap/kernels.hpp"
#include "plap/solver.hpp"

using namespace plap;

namespace {

struct StepFixture {
  Grid grid;
  std::vector<std::size_t> nodes;
  std::vector<double> current, next;
  kernels::StepInputs in;

  explicit StepFixture(int n, double h) {
    const auto params = make_params(3.0, 0.01, n);
    const double dt = dyadic_time_step(h, params, 0.9);
    grid = make_grid(n, 1.0, h, dt, -dt, 0.0);
    current.resize(grid.node_count());
    for (std::size_t i = 0; i < current.size(); ++i) {
      const Point x = grid.point(i);
      bool off_faces = true;
      for (int a = 0; a < n; ++a) off_faces = off_faces && std::abs(x[a]) < 1.0 - 0.5 * h;
      if (off_faces) nodes.push_back(i);
      current[i] = std::sin(2 * x[0]) * std::cos(x[1] + 0.3) + x[2] * x[2];
    }
    next = current;
    in = {&grid, params, dt, nodes};
  }
};

template <auto Step>
void BM_Step(benchmark::State& state) {
  StepFixture f(static_cast<int>(state.range(0)), std::ldexp(1.0, -static_cast<int>(state.range(1))));
  for (auto _ : state) {
    auto stats = Step(f.in, f.current, f.next);
    benchmark::DoNotOptimize(stats);
    benchmark::DoNotOptimize(f.next.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.nodes.size()));
}

template <auto Extrema>
void BM_Extrema(benchmark::State& state) {
  const std::size_t nodes = static_cast<std::size_t>(state.range(0));
  const int levels = 64;
  std::vector<double> values(nodes * levels);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::sin(0.37 * static_cast<double>(i));
  std::vector<std::size_t> list;
  for (std::size_t i = 0; i < nodes; i += 2) list.push_back(i);
  for (auto _ : state) {
    auto e = Extrema(values, nodes, 0, levels - 1, list);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(list.size() * levels));
}

}  // namespace

BENCHMARK(BM_Step<kernels::step_serial>)->Name("step_serial")->Args({2, 6})->Args({2, 8})->Args({3, 5});
BENCHMARK(BM_Step<kernels::step_omp>)->Name("step_omp")->Args({2, 6})->Args({2, 8})->Args({3, 5});
BENCHMARK(BM_Extrema<kernels::extrema_serial>)->Name("extrema_serial")->Arg(4225)->Arg(66049);
BENCHMARK(BM_Extrema<kernels::extrema_omp>)->Name("extrema_omp")->Arg(4225)->Arg(66049);

BENCHMARK_MAIN();
