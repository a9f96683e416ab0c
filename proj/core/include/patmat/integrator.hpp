#pragma once

// Limiting moments as integrals of the path-counting function:
//   lim E[tr(X^w)] = 1/(n+1)! * integral over [0,1]^(n+1) of f_w(x) dx
// for a word w of length 2n.

#include <cstddef>
#include <cstdint>
#include <span>

#include "patmat/moment_estimate.hpp"
#include "patmat/paths.hpp"
#include "patmat/pattern.hpp"
#include "patmat/words.hpp"

namespace patmat {

struct TheoryOptions {
  std::size_t max_word_length = kDefaultWordCap;
  double grid_budget = 1e7;  // max g^(n+1)
  unsigned threads = 0;      // 0: default_thread_count()
};

/// Plain Monte Carlo with iid uniform points. Each sample's point comes from
/// a stream keyed by (seed, sample index) and f values are summed as exact
/// integers, so the result is bit-identical for any thread count. Odd or
/// star-imbalanced words short-circuit to an exact 0.
MomentEstimate theory_moment_mc(std::span<const Pattern> patterns, const Word& w, std::size_t samples,
                                std::uint64_t seed, const TheoryOptions& options = {});

/// Midpoint rule on a g^(n+1) grid; midpoints with repeated coordinates
/// contribute 0.
MomentEstimate theory_moment_grid(std::span<const Pattern> patterns, const Word& w, std::size_t cells_per_axis,
                                  const TheoryOptions& options = {});

double factorial(std::size_t k);

}  // namespace patmat
