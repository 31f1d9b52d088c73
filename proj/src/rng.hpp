#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace coedit::detail {

// Uniform index in [0, n) by rejection, so results do not depend on the
// standard library's distribution implementation.
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace coedit::detail
