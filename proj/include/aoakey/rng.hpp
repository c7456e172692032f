#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace aoakey {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent stream seeds from a master seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream identified by `tags` under `base`. Distinct tag paths give
/// statistically independent streams; the mapping never depends on thread count.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t s = mix64(base);
  for (auto t : tags) s = mix64(s ^ mix64(t + 0x632be59bd9b4e019ULL));
  return s;
}

/// Small-state generator for places that open many short streams (one per beam), where
/// seeding a Mersenne Twister would dominate the cost.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  constexpr result_type operator()() noexcept {
    const std::uint64_t out = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

 private:
  std::uint64_t state_;
};

// Stream tags. Values are part of the reproducibility contract; do not renumber.
namespace stream {
inline constexpr std::uint64_t kSymbols = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kBeamNoise = 3;
inline constexpr std::uint64_t kTrial = 4;
inline constexpr std::uint64_t kMobility = 5;
inline constexpr std::uint64_t kAlice = 6;
inline constexpr std::uint64_t kBob = 7;
inline constexpr std::uint64_t kPermutation = 8;
inline constexpr std::uint64_t kHash = 9;
inline constexpr std::uint64_t kChannel = 10;
}  // namespace stream

/// Circular complex Gaussian sample with E|z|^2 = variance.
template <class Gen = Rng>
std::complex<double> complex_normal(Gen& rng, double variance) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double scale = std::sqrt(0.5 * variance);
  const double re = n(rng);
  const double im = n(rng);
  return {scale * re, scale * im};
}

}  // namespace aoakey
