#pragma once

#include <cstdint>
#include <random>

namespace benthos {

// splitmix64 finalizer; decorrelates nearby seeds and stream indices.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream for one path or replicate. Streams depend only on
// (seed, index), never on thread scheduling, so results are reproducible at
// any thread count.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(seed + mix64(index + 1)));
}

}  // namespace benthos
