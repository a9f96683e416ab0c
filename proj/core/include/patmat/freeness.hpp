#pragma once

// Centred alternating products of independent patterned and fully filled
// matrices:
//   tr((X_1^{w_1} - m_1 I)(X_2^{w_2} - m_2 I) ... (X_d^{w_d} - m_d I))
// whose expectation vanishes as N grows when consecutive factors come from
// different groups and group 2 holds fully filled square matrices.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patmat/ensemble.hpp"
#include "patmat/moment_estimate.hpp"
#include "patmat/pattern.hpp"
#include "patmat/words.hpp"

namespace patmat {

/// One factor X^{w} - m I. Each factor owns an independent matrix, so the
/// word must use a single letter.
struct AlternatingFactor {
  int group = 1;        // 1 or 2
  Pattern pattern;      // index space
  Word word;
  std::optional<double> center;  // limit m; computed from theory when absent
};

struct AlternatingSpec {
  std::vector<AlternatingFactor> factors;
  std::vector<std::size_t> sizes;
  std::size_t trials = 20;
  EntryDist dist = EntryDist::gaussian_real;
  std::uint64_t seed = 0;
  bool compute_centers = true;
  std::size_t theory_samples = 1'000'000;
};

struct FreenessOptions {
  unsigned threads = 0;
  unsigned supersample = 1;
};

/// Throws ValidationError for specs that cannot run; returns warnings for
/// specs that run but fall outside the theorem's hypotheses (adjacent factors
/// from the same group, non-full group-2 pattern, unbalanced word).
std::vector<std::string> check_spec(const AlternatingSpec& spec);

/// Centres m_k: supplied values, or theory_moment_mc with the spec's sample
/// count. Throws ValidationError when a centre is missing and computing is
/// disabled.
std::vector<double> resolve_centers(const AlternatingSpec& spec, const FreenessOptions& options = {});

/// Monte-Carlo estimate over spec.trials of the centred product trace at size
/// N, with the given centres. Factor k of trial t is seeded by
/// derive_seed(spec.seed, {t, k}).
MomentEstimate centered_moment(const AlternatingSpec& spec, std::size_t n, std::span<const double> centers,
                               const FreenessOptions& options = {});

MomentEstimate centered_moment(const AlternatingSpec& spec, std::size_t n, const FreenessOptions& options = {});

struct SweepRow {
  std::size_t size;
  MomentEstimate estimate;
};

std::vector<SweepRow> freeness_sweep(const AlternatingSpec& spec, const FreenessOptions& options = {});

/// "N,estimate,stderr" with one row per size.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Reads a spec document:
///   {"factors": [{"group": 1, "pattern": <pattern JSON | preset | file>,
///                 "word": "aA", "center": 0.55}, ...],
///    "sizes": [100, 200], "trials": 20, "dist": "gaussian-real",
///    "seed": 0, "theory_samples": 1000000}
/// Pattern file paths are resolved relative to `base_dir`.
AlternatingSpec parse_alternating_spec(std::string_view text, const std::filesystem::path& base_dir = {});

}  // namespace patmat
