#include "patmat/seeding.hpp"

#include <cmath>
#include <numbers>

namespace patmat {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(master ^ 0x6A09E667F3BCC909ULL);
  std::uint64_t salt = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t v : path) {
    h = mix64(h ^ mix64(v + salt));
    salt += 0x9E3779B97F4A7C15ULL;
  }
  return h;
}

void CounterRng::normal_pair(double& a, double& b) noexcept {
  const double radius = std::sqrt(-2.0 * std::log(uniform_open_zero()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  a = radius * std::cos(angle);
  b = radius * std::sin(angle);
}

}  // namespace patmat
