#pragma once

#include <cstdint>

namespace rqlsha {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based draw keyed on (seed, stream, counter): order-independent,
/// mergeable, reproducible across runs.
inline uint64_t mix64(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t h = splitmix64(seed ^ 0x2545f4914f6cdd1dull);
  h = splitmix64(h ^ splitmix64(stream));
  return splitmix64(h ^ counter);
}

inline double uniform01(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

}  // namespace rqlsha
