#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace patmat {

enum class Method { mc, grid, exact, empirical, oracle };

std::string_view to_string(Method method) noexcept;

/// A moment value with its Monte-Carlo standard error. Deterministic methods
/// (grid, exact, oracle) report a zero standard error.
struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  Method method = Method::exact;
};

/// Mean and standard error of the mean (sample std / sqrt(n)) of `values`,
/// accumulated in index order.
MomentEstimate summarize(std::span<const double> values, Method method);

/// Unbiased sample variance of `values` (0 when fewer than two values).
double sample_variance(std::span<const double> values);

}  // namespace patmat
