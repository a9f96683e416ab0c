#pragma once

#include <cstdint>
#include <initializer_list>

namespace patmat {

/// SplitMix64 output function: a bijective 64-bit finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless sub-seed derivation. The result depends only on the master seed
/// and the ordered list of coordinates (trial, letter, row, ...), never on the
/// order in which streams are requested, so parallel work stays reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

/// Small SplitMix64 stream seeded from a derived key.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t key) noexcept : state_(key) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() noexcept { return 1.0 - uniform(); }

  /// Standard normal pair by Box-Muller.
  void normal_pair(double& a, double& b) noexcept;

  double normal() noexcept {
    double a;
    double b;
    normal_pair(a, b);
    return a;
  }

private:
  std::uint64_t state_;
};

}  // namespace patmat
