#include "patmat/moment_estimate.hpp"

#include <cmath>

namespace patmat {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::mc: return "mc";
    case Method::grid: return "grid";
    case Method::exact: return "exact";
    case Method::empirical: return "empirical";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  // Welford, in index order.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  return m2 / static_cast<double>(values.size() - 1);
}

MomentEstimate summarize(std::span<const double> values, Method method) {
  MomentEstimate e;
  e.method = method;
  e.samples = values.size();
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.value = sum / static_cast<double>(values.size());
  e.std_error = std::sqrt(sample_variance(values) / static_cast<double>(values.size()));
  return e;
}

}  // namespace patmat
