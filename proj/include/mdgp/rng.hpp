#pragma once

#include <cstdint>

namespace mdgp {

// SplitMix64 (Steele, Lea, Flood). Fully specified so that seeded runs
// reproduce across platforms and implementations:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
//              z = (z ^ z>>27) * 0x94D049BB133111EB
//   return z ^ z>>31
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  // Value in [0, bound) by plain modulo; bound must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

  // Uniform in [0, 1) from the top 53 bits.
  constexpr double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Independent stream seed for restart `index` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  SplitMix64 mix(seed ^ (index * 0xD1B54A32D192ED03ULL));
  return mix.next();
}

}  // namespace mdgp
