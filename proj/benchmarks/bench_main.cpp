#include <random>

#include <benchmark/benchmark.h>

#include "patmat/ensemble.hpp"
#include "patmat/integrator.hpp"
#include "patmat/paths.hpp"
#include "patmat/pattern.hpp"
#include "patmat/words.hpp"

using namespace patmat;

namespace {

std::string alternating(int n) {
  std::string s;
  for (int k = 0; k < n; ++k) s += "aA";
  return s;
}

void BM_EnumerateShapes(benchmark::State& state) {
  auto w = Word::parse(alternating(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_shapes(w, 16));
}
BENCHMARK(BM_EnumerateShapes)->DenseRange(2, 7);

void BM_PathCounter(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto w = Word::parse(alternating(n));
  PathCounter f(enumerate_shapes(w), w, {to_index_space(preset("three-discs"))});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (auto _ : state) {
    for (auto& v : x) v = u(rng);
    benchmark::DoNotOptimize(f(x));
  }
}
BENCHMARK(BM_PathCounter)->DenseRange(1, 5);

void BM_TheoryMc(benchmark::State& state) {
  std::vector pats{to_index_space(preset("three-discs"))};
  auto w = Word::parse("aAaAaA");
  TheoryOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(theory_moment_mc(pats, w, 100000, 0, opts));
}
BENCHMARK(BM_TheoryMc)->Unit(benchmark::kMillisecond);

void BM_SampleMatrix(benchmark::State& state) {
  auto p = to_index_space(preset("three-discs"));
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(p, n, EntryDist::gaussian_real, ++seed));
}
BENCHMARK(BM_SampleMatrix)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_WordTrace(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<MatrixSample> m{sample_matrix(to_index_space(preset("three-discs")), n, EntryDist::gaussian_real, 1)};
  auto w = Word::parse("aAaAaA");
  for (auto _ : state) benchmark::DoNotOptimize(word_trace(m, w));
}
BENCHMARK(BM_WordTrace)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  std::vector pats{Pattern::full(Space::index)};
  auto w = Word::parse("aAaAaA");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_moment_oracle(pats, w, n, EntryDist::gaussian_real));
}
BENCHMARK(BM_Oracle)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
