#pragma once

// Counter-based randomness. Every draw is a pure function of (seed, key, counter)
// so generated models and sample batches do not depend on enumeration order,
// thread count, or the standard library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>

namespace spinlearn::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t hash_indices(std::span<const std::uint32_t> idx) noexcept {
  std::uint64_t h = splitmix64(idx.size() + 0x51afd7ed558ccd00ULL);
  for (auto i : idx) h = mix(h, i);
  return h;
}

constexpr std::uint64_t hash_string(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in [0, 1) with 53 bits of resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t key, std::uint64_t counter = 0) noexcept {
  return to_unit(mix(mix(seed, key), counter));
}

// Box-Muller on two keyed uniforms.
inline double normal(std::uint64_t seed, std::uint64_t key, std::uint64_t counter = 0) noexcept {
  const std::uint64_t base = mix(mix(seed, key), counter);
  const double u1 = 1.0 - to_unit(splitmix64(base));  // (0, 1]
  const double u2 = to_unit(splitmix64(base ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double rademacher(std::uint64_t seed, std::uint64_t key, std::uint64_t counter = 0) noexcept {
  return (mix(mix(seed, key), counter) >> 63) ? 1.0 : -1.0;
}

// Sequential engine for chains; satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double unit() noexcept { return to_unit((*this)()); }
  std::size_t below(std::size_t n) noexcept {
    return static_cast<std::size_t>(unit() * static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

}  // namespace spinlearn::rng
