#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ric {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

}  // namespace detail

/// Independent stream for (seed, path...). Used wherever work is split per
/// item, epoch or chain so results do not depend on scheduling.
inline Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  std::uint64_t h = detail::splitmix64(seed);
  for (std::uint64_t p : path) h = detail::splitmix64(h ^ detail::splitmix64(p + 0x632BE59BD9B4E019ULL));
  return Rng(h);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace ric
