// Serial reference vs OpenMP kernels on grids large enough to matter.
// Run: ./build/bench/bench_kernels

#include <benchmark/benchmark.h>

#include "hydrolax/kernels.hpp"

using namespace hydrolax;
namespace k = hydrolax::kernels;

namespace {

const GridSpec& big_grid() {
  static const GridSpec g({{0.2, 1.4, 513}, {0.1, 2.1, 513}});
  return g;
}

const Expr& residual_expr() {
  // the shape of a frame-system residual: nested quotients and trig
  static const Expr e = parse_expression(
      "cos(u1)/(1 + 0.1*u2) - sin(u1)*exp(0.05*u2) + (u1*u2)/(2 + sin(u1))");
  return e;
}

std::vector<Complex> sampled_data() {
  std::vector<Complex> out(big_grid().size());
  (void)k::serial::sample(residual_expr(), big_grid(), std::nullopt, out);
  return out;
}

void bench_sample_serial(benchmark::State& state) {
  std::vector<Complex> out(big_grid().size());
  for (auto _ : state) {
    (void)k::serial::sample(residual_expr(), big_grid(), std::nullopt, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
}

void bench_sample_parallel(benchmark::State& state) {
  std::vector<Complex> out(big_grid().size());
  for (auto _ : state) {
    (void)k::par::sample(residual_expr(), big_grid(), std::nullopt, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
}

void bench_fd_partial_serial(benchmark::State& state) {
  const auto in = sampled_data();
  std::vector<Complex> out(in.size());
  for (auto _ : state) {
    k::serial::fd_partial(in, big_grid(), 0, out);
    k::serial::fd_partial(out, big_grid(), 1, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
}

void bench_fd_partial_parallel(benchmark::State& state) {
  const auto in = sampled_data();
  std::vector<Complex> out(in.size());
  for (auto _ : state) {
    k::par::fd_partial(in, big_grid(), 0, out);
    k::par::fd_partial(out, big_grid(), 1, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
}

void bench_elementwise_serial(benchmark::State& state) {
  const auto a = sampled_data();
  std::vector<Complex> out(a.size());
  for (auto _ : state) {
    k::serial::mul(a, a, out);
    k::serial::add(out, a, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
}

void bench_elementwise_parallel(benchmark::State& state) {
  const auto a = sampled_data();
  std::vector<Complex> out(a.size());
  for (auto _ : state) {
    k::par::mul(a, a, out);
    k::par::add(out, a, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
}

void bench_max_abs_serial(benchmark::State& state) {
  const auto a = sampled_data();
  for (auto _ : state) {
    auto m = k::serial::max_abs(a);
    benchmark::DoNotOptimize(m);
  }
}

void bench_max_abs_parallel(benchmark::State& state) {
  const auto a = sampled_data();
  for (auto _ : state) {
    auto m = k::par::max_abs(a);
    benchmark::DoNotOptimize(m);
  }
}

} // namespace

BENCHMARK(bench_sample_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_sample_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_fd_partial_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_fd_partial_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_elementwise_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_elementwise_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_max_abs_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(bench_max_abs_parallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
