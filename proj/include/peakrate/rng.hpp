#pragma once

// Seeded randomness shared by the heuristic, the baselines, the scenario
// generator and the benchmark harness.
//
// Generator: SplitMix64 (Steele, Lea & Flood). State advances by the golden
// gamma 0x9E3779B97F4A7C15 and each output is the state passed through the
// 64-bit finalizer below. Streams are therefore fixed by the seed alone and
// identical on every platform.
//
// Seed derivation: derive_seed(a, b) = finalize(a ^ finalize(b + gamma)),
// folded left over longer tuples. Used for per-pass RTWPA streams and
// per-scenario benchmark seeds.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace peakrate {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + kGoldenGamma));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  for (std::uint64_t p : parts) seed = derive_seed(seed, p);
  return seed;
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Uniform integer in [lo, hi] by 128-bit multiply-high (no rejection loop;
// bias is below range / 2^64).
template <typename Gen>
inline int uniform_int(Gen& gen, int lo, int hi) {
  const auto range = static_cast<std::uint64_t>(static_cast<long long>(hi) - lo + 1);
  const auto wide = static_cast<unsigned __int128>(gen()) * range;
  return lo + static_cast<int>(static_cast<std::uint64_t>(wide >> 64));
}

// Uniform double in [0, 1) from the top 53 bits.
template <typename Gen>
inline double uniform_unit(Gen& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace peakrate
