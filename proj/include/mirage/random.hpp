#pragma once

#include <cstdint>
#include <random>

namespace mirage {

// All randomness goes through mt19937_64, whose output sequence is fixed by
// the C++ standard. Doubles are built from the top 53 bits so the mapping is
// identical on every platform (std::uniform_real_distribution is not).
using Rng = std::mt19937_64;

inline constexpr const char* kGeneratorName = "mt19937_64/u53 (std::mt19937_64, double = (x >> 11) * 2^-53)";

// Uniform on [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream keyed by (seed, stream id).
inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x5bd1e995ULL)));
}

}  // namespace mirage
