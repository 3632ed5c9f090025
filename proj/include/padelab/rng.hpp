#pragma once

// SplitMix64 (Steele, Lea, Flood; public domain reference constants).
// Chosen over std::mt19937 because the output stream is fully specified by
// the algorithm, so seeded noise realizations are bit-identical across
// platforms and standard libraries.

#include <cstdint>

namespace padelab {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits, the full double mantissa.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-1,1).
  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

 private:
  std::uint64_t state_;
};

}  // namespace padelab
