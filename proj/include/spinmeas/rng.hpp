#pragma once

#include <cstdint>

namespace spinmeas {

// counter-based generator: output k depends only on (seed, k)
inline constexpr const char* generator_algorithm = "splitmix64";
inline constexpr const char* generator_version = "1.0";

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // per-task seed derived from a master seed and a stream index
  static std::uint64_t split(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master + 0x632BE59BD9B4E019ULL * (stream + 1));
    return g.next();
  }
};

}  // namespace spinmeas
