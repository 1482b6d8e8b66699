#include "bovifuse/rng.hpp"

#include "bovifuse/errors.hpp"

namespace bovifuse {

namespace {

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

Rng::Rng(uint64_t seed) : seed_(seed) {
  SplitMix64 sm(seed);
  for (auto& w : s_) w = sm.next();
}

uint64_t Rng::next_u64() {
  const uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  double u = next_double();
  return lo + u * (hi - lo);
}

uint64_t Rng::uniform_index(uint64_t n) {
  if (n == 0) throw ValidationError("uniform_index: n must be nonzero");
  // Lemire's multiply-shift; bias is < 2^-64 * n, far below anything our
  // frequency tests can see.
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

Rng Rng::substream(std::string_view label) const {
  return Rng(SplitMix64(seed_ ^ fnv1a64(label)).next());
}

}  // namespace bovifuse
