#pragma once

#include <cstdint>
#include <vector>

namespace netsig {

// splitmix64. Fixed algorithm, so seed-derived streams are identical on
// every platform, unlike distribution wrappers in <random>.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in (0, 1]: 53 mantissa bits, never 0 so it can feed a log.
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }
};

// Fisher-Yates with an explicit generator; modulo bias is irrelevant for
// a visit-order shuffle and the result is platform-stable.
inline void deterministic_shuffle(std::vector<int>& v, SplitMix64& gen) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(gen.next() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace netsig
