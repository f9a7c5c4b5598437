// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "folcc/frames.hpp"
#include "folcc/gf.hpp"
#include "folcc/linalg.hpp"

using namespace folcc;

namespace {

linalg::IntMatrix boundary_matrix(int degree, int weight) {
  const gf::ComplexSlice s = gf::slice(gf::Flavor::full(), degree, weight);
  linalg::IntMatrix m(s.boundary_out.rows(), s.boundary_out.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = s.boundary_out(r, c).get_num();
  return m;
}

void BM_RankParallel(benchmark::State& st) {
  const auto m = boundary_matrix(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(linalg::rank(m));
  st.SetLabel(std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void BM_RankSerial(benchmark::State& st) {
  const auto m = boundary_matrix(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(linalg::reference::rank(m));
  st.SetLabel(std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

PseudogroupPresentation rotation_presentation() {
  PseudogroupPresentation p;
  p.charts.push_back({"S", Interval{}});
  p.generators.push_back(
      {"phi", LocalDiffeo::parse("conj:x + 1/100*sin(6.283185307179586*x)@sqrt(2) - 1"), "S", "S", Interval{0.0, 1.0}});
  return p;
}

void BM_ConnectionParallel(benchmark::State& st) {
  const auto pres = rotation_presentation();
  const auto cand = connection_from_conjugacy(LocalDiffeo::parse("x + 1/100*sin(6.283185307179586*x)"), {"S"});
  const SampleSpec grid{static_cast<int>(st.range(0)), 0.01};
  for (auto _ : st) benchmark::DoNotOptimize(verify_connection(pres, cand, grid).max_residual);
}

void BM_ConnectionSerial(benchmark::State& st) {
  const auto pres = rotation_presentation();
  const auto cand = connection_from_conjugacy(LocalDiffeo::parse("x + 1/100*sin(6.283185307179586*x)"), {"S"});
  const SampleSpec grid{static_cast<int>(st.range(0)), 0.01};
  for (auto _ : st) benchmark::DoNotOptimize(reference::verify_connection(pres, cand, grid).max_residual);
}

}  // namespace

BENCHMARK(BM_RankParallel)->Args({3, 24})->Args({4, 30})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankSerial)->Args({3, 24})->Args({4, 30})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConnectionParallel)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConnectionSerial)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
