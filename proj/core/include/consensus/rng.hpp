#pragma once

#include <cstdint>
#include <random>

namespace consensus {

// All randomness in the toolkit flows through std::mt19937_64, whose output
// sequence is fixed by the C++ standard, so runs are bit-reproducible across
// platforms. Bounded draws use mask-based rejection rather than
// std::uniform_int_distribution, whose mapping is implementation-defined.

// SplitMix64 (Steele, Lea & Flood, "Fast splittable pseudorandom number
// generators"). Used only to derive engine seeds and substream seeds.
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

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) {
  SplitMix64 sm(seed);
  return Engine(sm.next());
}

// Seed for the index-th independent substream of a master seed: the
// (index+1)-th SplitMix64 output of the master stream. SplitMix64 state
// advances by a fixed constant per call, so the stream can be entered at any
// position directly.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 sm(master + index * 0x9e3779b97f4a7c15ULL);
  return sm.next();
}

// Uniform draw from [0, bound) by masked rejection; unbiased, and consumes a
// deterministic function of the engine stream.
inline std::uint64_t draw_below(Engine& eng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t v = eng() & mask;
    if (v < bound) return v;
  }
}

inline int draw_int(Engine& eng, int lo, int hi) {  // inclusive range
  return lo + static_cast<int>(draw_below(eng, std::uint64_t(hi - lo) + 1));
}

// Uniform in [0,1) with 53 random mantissa bits.
inline double draw_unit(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline bool draw_bernoulli(Engine& eng, double p) {
  return draw_unit(eng) < p;
}

}  // namespace consensus
