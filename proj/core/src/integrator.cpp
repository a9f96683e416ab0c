#include "patmat/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "patmat/errors.hpp"
#include "patmat/parallel.hpp"
#include "patmat/seeding.hpp"

namespace patmat {
namespace {

constexpr std::size_t kChunk = 4096;

struct ChunkSums {
  std::uint64_t sum = 0;
  unsigned __int128 sum_sq = 0;
};

}  // namespace

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
  return f;
}

MomentEstimate theory_moment_mc(std::span<const Pattern> patterns, const Word& w, std::size_t samples,
                                std::uint64_t seed, const TheoryOptions& options) {
  if (samples == 0) throw ValidationError("theory_moment_mc needs at least one sample");
  auto shapes = enumerate_shapes(w, options.max_word_length);
  const PathCounter f(std::move(shapes), w, std::vector<Pattern>(patterns.begin(), patterns.end()));
  if (f.shape_count() == 0) return MomentEstimate{0.0, 0.0, 0, Method::exact};

  const std::size_t dim = f.dimension();
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkSums> partial(chunks);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    std::vector<double> x(dim);
    ChunkSums acc;
    const std::size_t end = std::min(samples, (c + 1) * kChunk);
    for (std::size_t s = c * kChunk; s < end; ++s) {
      CounterRng rng(derive_seed(seed, {s}));
      for (double& xi : x) xi = rng.uniform();
      const std::uint64_t v = f(x);
      acc.sum += v;
      acc.sum_sq += static_cast<unsigned __int128>(v) * v;
    }
    partial[c] = acc;
  });

  std::uint64_t sum = 0;
  unsigned __int128 sum_sq = 0;
  for (const ChunkSums& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const long double n = static_cast<long double>(samples);
  const long double mean = static_cast<long double>(sum) / n;
  long double var = 0.0L;
  if (samples > 1) {
    var = (static_cast<long double>(sum_sq) - static_cast<long double>(sum) * mean) / (n - 1.0L);
    var = std::max(0.0L, var);
  }
  const double norm = factorial(dim);
  MomentEstimate e;
  e.value = static_cast<double>(mean) / norm;
  e.std_error = static_cast<double>(std::sqrt(var / n)) / norm;
  e.samples = samples;
  e.method = Method::mc;
  return e;
}

MomentEstimate theory_moment_grid(std::span<const Pattern> patterns, const Word& w, std::size_t g,
                                  const TheoryOptions& options) {
  if (g < 2) throw ValidationError("grid needs at least 2 cells per axis");
  auto shapes = enumerate_shapes(w, options.max_word_length);
  const PathCounter f(std::move(shapes), w, std::vector<Pattern>(patterns.begin(), patterns.end()));
  if (f.shape_count() == 0) return MomentEstimate{0.0, 0.0, 0, Method::exact};

  const std::size_t dim = f.dimension();
  const double cells = std::pow(static_cast<double>(g), static_cast<double>(dim));
  if (cells > options.grid_budget) {
    throw BudgetError("grid of " + std::to_string(g) + "^" + std::to_string(dim) + " cells exceeds the budget");
  }
  // f is symmetric in its arguments and vanishes on repeated midpoints, so
  // the full sum is (n+1)! times the sum over strictly increasing index
  // tuples; the (n+1)! cancels against the normalisation.
  std::vector<std::uint64_t> partial(g, 0);
  parallel_for(g, options.threads, [&](std::size_t first) {
    std::vector<std::size_t> idx(dim);
    std::vector<double> x(dim);
    std::uint64_t acc = 0;
    idx[0] = first;
    auto rec = [&](auto&& self, std::size_t depth) -> void {
      if (depth == dim) {
        for (std::size_t k = 0; k < dim; ++k) x[k] = (static_cast<double>(idx[k]) + 0.5) / static_cast<double>(g);
        acc += f(x);
        return;
      }
      for (std::size_t a = idx[depth - 1] + 1; a < g; ++a) {
        idx[depth] = a;
        self(self, depth + 1);
      }
    };
    rec(rec, 1);
    partial[first] = acc;
  });
  std::uint64_t sum = 0;
  for (std::uint64_t p : partial) sum += p;
  MomentEstimate e;
  e.value = static_cast<double>(sum) / cells;
  e.std_error = 0.0;
  e.samples = static_cast<std::size_t>(cells);
  e.method = Method::grid;
  return e;
}

}  // namespace patmat
