#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace bovifuse {

/// splitmix64 (Steele/Lea/Vigna). Used to expand seeds into generator state
/// and to derive child-stream seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

uint64_t fnv1a64(std::string_view s);

/// xoshiro256** seeded via splitmix64. Every stochastic step in the
/// pipeline draws from this generator, so a run is reproducible bit for bit
/// from its seed alone, on any platform.
///
/// Named substreams (seed, label) decorrelate independent consumers: each
/// image's augmentation draws come from substream("augment:" + id), so
/// results do not depend on processing order.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  /// Uniform in [0,1) with 53 random bits.
  double next_double();

  /// Uniform in [lo,hi). Always consumes one draw, even when lo == hi.
  double uniform(double lo, double hi);

  /// Uniform integer in [0,n). n must be nonzero.
  uint64_t uniform_index(uint64_t n);

  /// Independent child stream derived from (seed, label).
  Rng substream(std::string_view label) const;

  uint64_t seed() const { return seed_; }

 private:
  std::array<uint64_t, 4> s_;
  uint64_t seed_;
};

/// Unbiased in-place Fisher-Yates permutation.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.uniform_index(i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Seeded convenience overload: same list + same seed always yields the
/// same permutation.
template <typename T>
std::vector<T> fisher_yates_shuffle(std::vector<T> items, uint64_t seed) {
  Rng rng(seed);
  fisher_yates_shuffle(items, rng);
  return items;
}

}  // namespace bovifuse
