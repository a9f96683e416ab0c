#pragma once

// Sampled approximating matrices and their moments at finite size.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "patmat/moment_estimate.hpp"
#include "patmat/pattern.hpp"
#include "patmat/words.hpp"

namespace patmat {

/// Entry distributions; all have mean 0 and E|z|^2 = 1.
enum class EntryDist {
  gaussian_real,
  gaussian_complex,  // (g1 + i g2) / sqrt(2)
  rademacher,        // +-1
  fourth_root,       // uniform on {1, i, -1, -i}
};

EntryDist parse_entry_dist(std::string_view name);
std::string_view to_string(EntryDist dist) noexcept;
bool is_real(EntryDist dist) noexcept;

/// E[z^p conj(z)^q] for one entry.
double entry_moment(EntryDist dist, unsigned p, unsigned q);

/// One unscaled draw from the stream keyed by `key`.
std::complex<double> draw_entry(EntryDist dist, std::uint64_t key) noexcept;

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// An N x N approximating matrix: iid entries scaled by 1/sqrt(N) on active
/// cells, exact zeros elsewhere. Real distributions are stored as real
/// matrices; their imaginary parts are identically zero.
struct MatrixSample {
  std::size_t size = 0;
  EntryDist dist = EntryDist::gaussian_real;
  std::variant<RealMatrix, ComplexMatrix> entries;

  bool is_real() const noexcept { return std::holds_alternative<RealMatrix>(entries); }
  std::complex<double> operator()(std::size_t i, std::size_t j) const;  // 0-based
  ComplexMatrix as_complex() const;
};

/// Entry (i, j) draws from the stream derive_seed(seed, {i, j}), so the
/// matrix does not depend on generation order.
MatrixSample sample_matrix(const Pattern& index_pattern, std::size_t n, EntryDist dist, std::uint64_t seed,
                           unsigned supersample = 1);

/// Same, from a precomputed row-major activation mask.
MatrixSample sample_matrix(std::span<const std::uint8_t> mask, std::size_t n, EntryDist dist, std::uint64_t seed);

/// Normalised trace (1/N) Tr of the word product, matrices indexed by letter.
std::complex<double> word_trace(std::span<const MatrixSample> by_letter, const Word& w);

/// Hutchinson estimate of the same trace from `probes` Rademacher vectors.
std::complex<double> word_trace_probed(std::span<const MatrixSample> by_letter, const Word& w, std::size_t probes,
                                       std::uint64_t seed);

struct EnsembleOptions {
  unsigned threads = 0;
  unsigned supersample = 1;
  std::size_t probes = 0;  // 0: exact trace
};

struct EmpiricalMoment {
  MomentEstimate estimate;      // mean of Re tr over trials, method = empirical
  double trial_variance = 0.0;  // sample variance of Re tr across trials
  double imag_mean = 0.0;
};

/// Trial t uses, for letter l, the matrix seeded by derive_seed(seed, {t, l}).
EmpiricalMoment empirical_moment(std::span<const Pattern> patterns, const Word& w, std::size_t n,
                                 std::size_t trials, EntryDist dist, std::uint64_t seed,
                                 const EnsembleOptions& options = {});

/// Exact E[tr(X^w)] at size N by summing the trace expansion over all N^m
/// index tuples with the distribution's moment rules. Refuses N^m > budget.
double exact_moment_oracle(std::span<const Pattern> patterns, const Word& w, std::size_t n, EntryDist dist,
                           double budget = 1e7, unsigned supersample = 1);

/// Eigenvalues of one sampled matrix (dense non-symmetric solver).
std::vector<std::complex<double>> spectrum(const Pattern& index_pattern, std::size_t n, EntryDist dist,
                                           std::uint64_t seed, std::size_t max_size = 5000,
                                           unsigned supersample = 1);

std::vector<std::complex<double>> eigenvalues(const MatrixSample& m);

}  // namespace patmat
