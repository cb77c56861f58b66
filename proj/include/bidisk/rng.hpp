#pragma once

// Seeded, platform-independent random streams and the point samplers used by
// every sweep and violation search.
//
// Stream layout: a 64-bit user seed and a 64-bit stream index (trial number,
// pair number, ...) are mixed by splitmix64 into a stream seed; four further
// splitmix64 outputs fill a xoshiro256** state. Doubles are the top 53 bits
// scaled by 2^-53, so u in [0, 1).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace bidisk {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  /// Independent stream for (seed, index); used so that parallel workers
  /// reproduce exactly the draws of a serial run.
  static constexpr Xoshiro256 stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
    return Xoshiro256(splitmix64_next(sm));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n).
  constexpr std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

inline constexpr std::array<double, 3> kBoundaryModuli{0.9, 0.99, 0.999};

/// One disk coordinate. Always consumes exactly four draws, in the order
/// angle, area-uniform modulus, bias coin, boundary level.
inline std::complex<double> sample_disk(Xoshiro256& rng, double boundary_bias) {
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  double modulus = std::sqrt(rng.uniform());
  const double coin = rng.uniform();
  const double level = rng.uniform();
  if (coin < boundary_bias) modulus = kBoundaryModuli[static_cast<std::size_t>(level * 3.0) % 3];
  return std::polar(modulus, angle);
}

/// A disk coordinate with modulus at most `radius` (area-uniform in that disk).
inline std::complex<double> sample_disk_within(Xoshiro256& rng, double radius) {
  const double angle = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(radius * std::sqrt(rng.uniform()), angle);
}

}  // namespace bidisk
