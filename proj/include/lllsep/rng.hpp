#pragma once

// Seedable, platform-stable randomness. std::mt19937_64 is fully specified
// by the standard; the standard distributions are not, so draws are built
// directly from raw 64-bit outputs here.
//
// Stream splitting: a run seed feeds SplitMix64, and each consumer takes the
// next SplitMix64 output as the seed of its own mt19937_64 stream, in a
// fixed order (see derive_streams).

#include <cstdint>
#include <random>

#include "lllsep/rational.hpp"

namespace lllsep {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// A bit-level reader over an mt19937_64 stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  bool next_bit() {
    if (bits_left_ == 0) {
      buffer_ = engine_();
      bits_left_ = 64;
    }
    bool bit = (buffer_ & 1U) != 0;
    buffer_ >>= 1;
    --bits_left_;
    return bit;
  }

  /// Uniform integer in [0, bound), bound > 0. Rejection on the 64-bit
  /// output keeps it exactly uniform.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Exact Bernoulli(p) for rational p in [0, 1]: compares a lazily drawn
  /// uniform binary fraction against the binary expansion of p.
  bool bernoulli(const BigRational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    if (p.get_num() == 1 && p.get_den() == 2) return !next_bit();
    BigInt remainder = p.get_num();
    const BigInt& den = p.get_den();
    for (;;) {
      remainder *= 2;
      bool digit = remainder >= den;
      if (digit) remainder -= den;
      bool bit = next_bit();
      if (bit != digit) return digit;  // U < p iff first differing bit is in p
    }
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  unsigned bits_left_ = 0;
};

}  // namespace lllsep
