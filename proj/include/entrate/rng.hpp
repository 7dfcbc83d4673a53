#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace entrate {

// SplitMix64 finalizer. This is the stream-splitting rule used everywhere:
// the seed of trial t under base seed b is mix_seed(b, t); nested streams
// chain the mix, e.g. mix_seed(mix_seed(base, stream_id), trial).
inline constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base ^ (0x9E3779B97F4A7C15ull * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Fixed sub-stream ids so independent experiment phases never share seeds.
enum : std::uint64_t {
  kStreamRegime = 1,
  kStreamBarron = 2,
  kStreamVariational = 3,
  kStreamDictionary = 4,
  kStreamCodeLength = 5,
};

// mt19937_64 has a standard-mandated bit stream, so sequences are
// reproducible across platforms. Doubles use the top 53 bits only;
// never std::uniform_*_distribution (those are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

// Inverse-CDF draw. `cumulative` is a nondecreasing vector ending at ~1;
// zero-probability outcomes are never selected.
inline std::uint32_t draw_index(Rng& rng, std::span<const double> cumulative) {
  const double u = rng.uniform();
  std::size_t lo = 0, hi = cumulative.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cumulative[mid] > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return static_cast<std::uint32_t>(lo);
}

}  // namespace entrate
